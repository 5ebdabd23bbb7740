#include "floquetlab/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "floquetlab/error.hpp"

namespace floquetlab {

namespace {

constexpr const char* kPiDigits =
    "3.14159265358979323846264338327950288419716939937510"
    "58209749445923078164062862089986280348253421170679";

mpq_class exact_decimal(std::string_view text) {
  std::string s(text);
  bool negative = false;
  std::size_t pos = 0;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    negative = s[pos] == '-';
    ++pos;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw DomainError("not a number: '" + s + "'");
  long exponent = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw DomainError("not a number: '" + s + "'");
    ++pos;
    std::size_t used = 0;
    try {
      exponent = std::stol(s.substr(pos), &used);
    } catch (const std::exception&) {
      throw DomainError("bad exponent in '" + s + "'");
    }
    if (pos + used != s.size()) throw DomainError("trailing characters in '" + s + "'");
    if (std::labs(exponent) > 10000) throw DomainError("exponent out of range in '" + s + "'");
  }
  mpz_class num(digits, 10);
  if (negative) num = -num;
  const long shift = exponent - frac_digits;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  mpq_class q = shift >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
  q.canonicalize();
  return q;
}

RationalApprox periodic_expansion(long head, long repeat, int terms, int min_bits) {
  std::vector<mpz_class> quotients{mpz_class(head)};
  const auto enough = [&](const RationalApprox& r) {
    return static_cast<int>(quotients.size()) >= terms &&
           static_cast<int>(mpz_sizeinbase(r.value().get_den_mpz_t(), 2)) >= min_bits;
  };
  while (true) {
    if (static_cast<int>(quotients.size()) >= terms) {
      RationalApprox r = from_partial_quotients(quotients);
      if (enough(r)) return r;
    }
    quotients.emplace_back(repeat);
  }
}

}  // namespace

RationalApprox::RationalApprox(long numerator, unsigned long denominator, int source_depth)
    : source_depth_(source_depth) {
  if (denominator == 0) throw DomainError("zero denominator");
  value_ = mpq_class(mpz_class(numerator), mpz_class(denominator));
  value_.canonicalize();
}

RationalApprox::RationalApprox(mpq_class value, int source_depth)
    : value_(std::move(value)), source_depth_(source_depth) {
  if (sgn(value_.get_den()) == 0) throw DomainError("zero denominator");
  value_.canonicalize();
}

double RationalApprox::to_double() const {
  return round_to_double(value_.get_num(), value_.get_den());
}

std::string RationalApprox::to_string() const { return value_.get_str(); }

double round_to_double(const mpz_class& num_in, const mpz_class& den_in) {
  if (sgn(den_in) == 0) throw DomainError("zero denominator");
  mpz_class num = num_in;
  mpz_class den = den_in;
  if (sgn(den) < 0) {
    num = -num;
    den = -den;
  }
  if (sgn(num) == 0) return 0.0;
  const bool negative = sgn(num) < 0;
  if (negative) num = -num;

  // Scale so that the integer quotient carries exactly 54 significant bits
  // (53 plus one rounding bit); the remainder acts as the sticky bit.
  const long nbits = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
  const long dbits = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  long shift = 54 - (nbits - dbits);
  mpz_class scaled_num = num;
  mpz_class scaled_den = den;
  if (shift >= 0) {
    mpz_mul_2exp(scaled_num.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(shift));
  } else {
    mpz_mul_2exp(scaled_den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(-shift));
  }
  mpz_class quotient;
  mpz_class remainder;
  mpz_tdiv_qr(quotient.get_mpz_t(), remainder.get_mpz_t(), scaled_num.get_mpz_t(),
              scaled_den.get_mpz_t());
  // quotient has 54 or 55 bits; normalize to 54.
  if (mpz_sizeinbase(quotient.get_mpz_t(), 2) > 54) {
    if (mpz_odd_p(quotient.get_mpz_t())) remainder += 1;  // sticky
    quotient >>= 1;
    --shift;
  }
  const bool round_bit = mpz_odd_p(quotient.get_mpz_t()) != 0;
  const bool sticky = sgn(remainder) != 0;
  quotient >>= 1;
  --shift;
  if (round_bit && (sticky || mpz_odd_p(quotient.get_mpz_t()))) quotient += 1;
  // quotient < 2^54 fits exactly in a double; ldexp performs no rounding
  // unless the result is subnormal.
  const double mantissa = static_cast<double>(quotient.get_ui());
  const double value = std::ldexp(mantissa, static_cast<int>(-shift));
  return negative ? -value : value;
}

RationalApprox from_partial_quotients(const std::vector<mpz_class>& quotients) {
  if (quotients.empty()) throw DomainError("empty continued fraction");
  mpz_class p_prev = 1, q_prev = 0;
  mpz_class p = quotients[0], q = 1;
  for (std::size_t k = 1; k < quotients.size(); ++k) {
    mpz_class p_next = quotients[k] * p + p_prev;
    mpz_class q_next = quotients[k] * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(p_next);
    q = std::move(q_next);
  }
  return RationalApprox(mpq_class(p, q), static_cast<int>(quotients.size()));
}

RationalApprox golden_rotation(int terms) { return periodic_expansion(0, 1, terms, 0); }

RationalApprox golden_ratio(int terms) { return periodic_expansion(1, 1, terms, 0); }

RationalApprox sqrt2(int terms) { return periodic_expansion(1, 2, terms, 0); }

const mpq_class& inverse_two_pi() {
  static const mpq_class value = [] {
    mpq_class pi = exact_decimal(kPiDigits);
    mpq_class result = 1 / (2 * pi);
    result.canonicalize();
    return result;
  }();
  return value;
}

RationalApprox parse_real(std::string_view text, int named_terms, int min_bits) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw DomainError("empty number");
  const int terms = std::max(named_terms, 1);
  if (s == "golden") return periodic_expansion(0, 1, terms, min_bits);
  if (s == "phi") return periodic_expansion(1, 1, terms, min_bits);
  if (s == "sqrt2") return periodic_expansion(1, 2, terms, min_bits);
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const mpq_class num = exact_decimal(s.substr(0, slash));
    const mpq_class den = exact_decimal(s.substr(slash + 1));
    if (sgn(den) == 0) throw DomainError("zero denominator in '" + s + "'");
    mpq_class q = num / den;
    q.canonicalize();
    return RationalApprox(q);
  }
  return RationalApprox(exact_decimal(s));
}

}  // namespace floquetlab
