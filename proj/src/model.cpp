#include "hopping/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "hopping/errors.hpp"

namespace hop {

SignSeq::SignSeq(std::vector<int> values) {
  s_.reserve(values.size());
  for (int v : values) {
    if (v != 1 && v != -1) throw InvalidArgument("sign entries must be +1 or -1, got " + std::to_string(v));
    s_.push_back(static_cast<std::int8_t>(v));
  }
}

SignSeq SignSeq::from_mask(std::uint64_t mask, std::size_t len) {
  if (len > 64) throw InvalidArgument("mask codec supports at most 64 entries");
  if (len < 64 && (mask >> len) != 0)
    throw InvalidArgument("mask " + std::to_string(mask) + " does not fit in " + std::to_string(len) + " entries");
  SignSeq s(len);
  for (std::size_t j = 0; j < len; ++j)
    if ((mask >> j) & 1U) s.s_[j] = -1;
  return s;
}

SignSeq SignSeq::parse(std::string_view text) {
  SignSeq s(text.size());
  for (std::size_t j = 0; j < text.size(); ++j) {
    if (text[j] == '-')
      s.s_[j] = -1;
    else if (text[j] != '+')
      throw InvalidArgument("sign string may contain only '+' and '-': \"" + std::string(text) + "\"");
  }
  return s;
}

void SignSeq::set(std::size_t i, int value) {
  if (value != 1 && value != -1) throw InvalidArgument("sign entries must be +1 or -1");
  s_.at(i) = static_cast<std::int8_t>(value);
}

std::uint64_t SignSeq::mask() const {
  if (s_.size() > 64) throw InvalidArgument("mask codec supports at most 64 entries");
  std::uint64_t m = 0;
  for (std::size_t j = 0; j < s_.size(); ++j)
    if (s_[j] < 0) m |= std::uint64_t{1} << j;
  return m;
}

std::string SignSeq::str() const {
  std::string out(s_.size(), '+');
  for (std::size_t j = 0; j < s_.size(); ++j)
    if (s_[j] < 0) out[j] = '-';
  return out;
}

SignSeq SignSeq::reversed() const {
  SignSeq r = *this;
  std::reverse(r.s_.begin(), r.s_.end());
  return r;
}

SignSeq SignSeq::negated() const {
  SignSeq r = *this;
  for (auto& v : r.s_) v = static_cast<std::int8_t>(-v);
  return r;
}

SignSeq SignSeq::rotated(std::size_t k) const {
  SignSeq r = *this;
  if (!s_.empty()) std::rotate(r.s_.begin(), r.s_.begin() + static_cast<std::ptrdiff_t>(k % s_.size()), r.s_.end());
  return r;
}

SignSeq SignSeq::operator*(const SignSeq& other) const {
  if (other.size() != size()) throw InvalidArgument("sign sequences of different lengths");
  SignSeq r = *this;
  for (std::size_t j = 0; j < s_.size(); ++j) r.s_[j] = static_cast<std::int8_t>(s_[j] * other.s_[j]);
  return r;
}

int SignSeq::product() const {
  int p = 1;
  for (auto v : s_) p *= v;
  return p;
}

std::uint64_t reverse_mask(std::uint64_t mask, std::size_t len) {
  std::uint64_t r = 0;
  for (std::size_t j = 0; j < len; ++j)
    if ((mask >> j) & 1U) r |= std::uint64_t{1} << (len - 1 - j);
  return r;
}

HoppingSpec::HoppingSpec(std::size_t n_, SignSeq sub_, SignSeq super_)
    : n(n_), sub(std::move(sub_)), super(std::move(super_)) {
  validate();
}

HoppingSpec HoppingSpec::single(SignSeq b) {
  const std::size_t len = b.size();
  return HoppingSpec(len + 1, std::move(b), SignSeq(len));
}

void HoppingSpec::validate() const {
  if (n < 1) throw InvalidArgument("matrix order must be at least 1");
  if (sub.size() != n - 1 || super.size() != n - 1)
    throw InvalidArgument("order " + std::to_string(n) + " needs sign sequences of length " + std::to_string(n - 1));
}

HoppingSpec HoppingSpec::normalized() const { return HoppingSpec(n, sub * super, SignSeq(n - 1)); }

TridiagC assemble(const HoppingSpec& spec, cplx shift) {
  spec.validate();
  TridiagC t;
  t.diag.assign(spec.n, -shift);
  t.sub.resize(spec.n - 1);
  t.super.resize(spec.n - 1);
  for (std::size_t i = 0; i + 1 < spec.n; ++i) {
    t.sub[i] = static_cast<double>(spec.sub[i]);
    t.super[i] = static_cast<double>(spec.super[i]);
  }
  return t;
}

PeriodizedSpec::PeriodizedSpec(SignSeq b_, SignSeq c_, cplx alpha_)
    : n(b_.size()), b(std::move(b_)), c(std::move(c_)), alpha(alpha_) {
  validate();
}

PeriodizedSpec::PeriodizedSpec(SignSeq b_, cplx alpha_) : n(b_.size()), b(std::move(b_)), c(n), alpha(alpha_) {
  validate();
}

void PeriodizedSpec::validate() const {
  if (n < 1) throw InvalidArgument("period must be at least 1");
  if (b.size() != n || c.size() != n) throw InvalidArgument("periodized spec needs b and c of length n");
  if (!(std::abs(std::abs(alpha) - 1.0) <= kAlphaModulusTol)) {
    std::ostringstream os;
    os.precision(17);
    os << "corner phase must have modulus 1, got |alpha| = " << std::abs(alpha);
    throw InvalidArgument(os.str());
  }
}

CMatrix assemble_periodized(const PeriodizedSpec& p) {
  p.validate();
  const auto n = static_cast<Eigen::Index>(p.n);
  const cplx inv_alpha = std::conj(p.alpha) / std::norm(p.alpha);
  CMatrix m = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    m(i + 1, i) = static_cast<double>(p.b[static_cast<std::size_t>(i)]);
    m(i, i + 1) = static_cast<double>(p.c[static_cast<std::size_t>(i)]);
  }
  m(n - 1, 0) += p.alpha * static_cast<double>(p.c[p.n - 1]);
  m(0, n - 1) += inv_alpha * static_cast<double>(p.b[p.n - 1]);
  return m;
}

std::uint64_t reversal_class_count(std::size_t len) {
  if (len >= 64) throw InvalidArgument("sequence length too large to count");
  const std::uint64_t all = std::uint64_t{1} << len;
  const std::uint64_t palindromes = std::uint64_t{1} << ((len + 1) / 2);
  return (all + palindromes) / 2;
}

EnumCursor::EnumCursor(std::size_t len, bool quotient, std::uint64_t begin, std::optional<std::uint64_t> end)
    : len_(len), quotient_(quotient), pos_(begin) {
  if (len >= 64) throw InvalidArgument("enumeration length must be below 64");
  const std::uint64_t total = std::uint64_t{1} << len;
  end_ = end ? std::min(*end, total) : total;
  if (pos_ > end_) pos_ = end_;
}

bool EnumCursor::next(Item& item) {
  while (pos_ < end_) {
    const std::uint64_t m = gray(pos_++);
    if (quotient_ && !is_reversal_canonical(m, len_)) continue;
    item.mask = m;
    item.flip.reset();
    if (last_) {
      const std::uint64_t diff = m ^ *last_;
      if (diff != 0 && (diff & (diff - 1)) == 0) item.flip = static_cast<std::size_t>(std::countr_zero(diff));
    }
    last_ = m;
    return true;
  }
  return false;
}

std::vector<EnumCursor::Item> enumerate(std::size_t len, bool quotient) {
  std::vector<EnumCursor::Item> out;
  EnumCursor cur(len, quotient);
  EnumCursor::Item it;
  while (cur.next(it)) out.push_back(it);
  return out;
}

bool is_pseudo_ergodic_window(const SignSeq& b, std::size_t k) {
  if (k < 1) throw InvalidArgument("window length must be at least 1");
  if (k > b.size()) return false;
  // 2^k distinct blocks need at least 2^k starting positions.
  if (k >= 63 || (std::uint64_t{1} << k) > b.size() - k + 1) return false;
  const std::uint64_t patterns = std::uint64_t{1} << k;
  const std::uint64_t window = patterns - 1;
  std::vector<bool> seen(patterns, false);
  std::uint64_t found = 0;
  std::uint64_t code = 0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    code = ((code << 1) | (b[j] < 0 ? 1U : 0U)) & window;
    if (j + 1 >= k && !seen[code]) {
      seen[code] = true;
      if (++found == patterns) return true;
    }
  }
  return false;
}

SignSeq sample_iid(std::size_t len, double p_plus, std::uint64_t seed) {
  if (!(p_plus > 0.0 && p_plus < 1.0)) throw InvalidArgument("p_plus must lie strictly between 0 and 1");
  std::mt19937_64 gen(seed);
  SignSeq s(len);
  for (std::size_t j = 0; j < len; ++j) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    if (!(u < p_plus)) s.flip(j);
  }
  return s;
}

}  // namespace hop
