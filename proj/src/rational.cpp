#include "cplogic/rational.hpp"

#include <cctype>

#include "cplogic/errors.hpp"

namespace cplogic {

Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s = s.substr(1);
  }
  auto bad = [&] { throw CpError(Errc::syntax_error, "malformed rational literal '" + text + "'"); };

  Rational q;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad();
    mpz_class n(num), d(den);
    if (d == 0) bad();
    q = Rational(n, d);
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(frac)) bad();
    mpz_class scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    mpz_class n = mpz_class(whole) * scale + mpz_class(frac);
    q = Rational(n, scale);
  } else {
    if (!all_digits(s)) bad();
    q = Rational(mpz_class(s));
  }
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

std::string rational_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string decimal_string(const Rational& q, int digits) {
  mpz_class num = q.get_num(), den = q.get_den();
  bool negative = num < 0;
  if (negative) num = -num;

  mpz_class scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;

  mpz_class scaled_q, r;
  mpz_fdiv_qr(scaled_q.get_mpz_t(), r.get_mpz_t(), mpz_class(num * scale).get_mpz_t(), den.get_mpz_t());
  // Round half to even on the remainder.
  mpz_class twice = 2 * r;
  int cmp = ::cmp(twice, den);
  if (cmp > 0 || (cmp == 0 && mpz_odd_p(scaled_q.get_mpz_t()))) scaled_q += 1;

  mpz_class whole = scaled_q / scale, frac = scaled_q % scale;
  std::string out = whole.get_str();
  if (digits > 0) {
    std::string f = frac.get_str();
    out += "." + std::string(static_cast<std::size_t>(digits) - f.size(), '0') + f;
  }
  if (negative && (whole != 0 || frac != 0)) out = "-" + out;
  return out;
}

}  // namespace cplogic
