#include "gdiam/rational.hpp"

#include <stdexcept>

namespace gdiam {

Rat parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  Rat r;
  auto dot = s.find('.');
  auto exp = s.find_first_of("eE");
  if (dot != std::string::npos || exp != std::string::npos) {
    // Decimal literal: parse digits exactly rather than through double.
    std::string mant = exp == std::string::npos ? s : s.substr(0, exp);
    long e10 = exp == std::string::npos ? 0 : std::stol(s.substr(exp + 1));
    bool neg = !mant.empty() && (mant[0] == '-' || mant[0] == '+');
    bool minus = !mant.empty() && mant[0] == '-';
    if (neg) mant = mant.substr(1);
    auto d = mant.find('.');
    std::string digits = mant;
    if (d != std::string::npos) {
      digits = mant.substr(0, d) + mant.substr(d + 1);
      e10 -= static_cast<long>(mant.size() - d - 1);
    }
    if (digits.empty()) throw std::invalid_argument("bad rational: " + s);
    mpz_class num;
    if (num.set_str(digits, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(e10 < 0 ? -e10 : e10));
    if (e10 >= 0) r = Rat(num * pow10);
    else r = Rat(num, pow10);
    r.canonicalize();
    if (minus) r = -r;
    return r;
  }
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rat& r) {
  Rat c = r;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

}  // namespace gdiam
