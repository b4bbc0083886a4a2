#include "arrowc/rational.hpp"

#include <cmath>

#include "arrowc/error.hpp"

namespace arrowc {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kCycle: return "CycleError";
    case ErrorCode::kNoInitialObject: return "NoInitialObject";
    case ErrorCode::kLcaViolation: return "LcaViolation";
    case ErrorCode::kUnknownKind: return "UnknownKind";
    case ErrorCode::kUnknownObject: return "UnknownObject";
    case ErrorCode::kNotPrime: return "NotPrime";
    case ErrorCode::kResultNotIndexing: return "ResultNotIndexing";
    case ErrorCode::kWeightSumNotOne: return "WeightSumNotOne";
    case ErrorCode::kNegativeWeight: return "NegativeWeight";
    case ErrorCode::kDuplicateAtom: return "DuplicateAtom";
    case ErrorCode::kBadParam: return "BadParam";
    case ErrorCode::kNotSurjective: return "NotSurjective";
    case ErrorCode::kUnknownAtom: return "UnknownAtom";
    case ErrorCode::kCommutativity: return "CommutativityError";
    case ErrorCode::kMapError: return "MapError";
    case ErrorCode::kNotMonotone: return "NotMonotone";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNotClosed: return "NotClosed";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kNotIso: return "NotIso";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kMismatchedU: return "MismatchedU";
    case ErrorCode::kNotAdmissible: return "NotAdmissible";
    case ErrorCode::kNotHomogeneous: return "NotHomogeneous";
    case ErrorCode::kNotFanGenerated: return "NotFanGenerated";
    case ErrorCode::kRangeError: return "RangeError";
    case ErrorCode::kNotReduced: return "NotReduced";
    case ErrorCode::kVerificationFailed: return "VerificationFailed";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kConfig: return "ConfigError";
  }
  return "Error";
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error(ErrorCode::kParse, "empty rational");
  Rational q;
  // mpq_set_str accepts "a/b" and "a"; reject anything with a decimal point.
  if (s.find_first_not_of("+-0123456789/") != std::string::npos ||
      q.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) {
    throw Error(ErrorCode::kParse, "cannot parse rational '" + s + "'");
  }
  if (q.get_den() == 0) throw Error(ErrorCode::kParse, "zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

Rational sum(std::span<const Rational> values) {
  Rational total = 0;
  for (const auto& v : values) total += v;
  return total;
}

double entropy_term(const Rational& p) {
  if (sgn(p) <= 0) return 0.0;
  const double x = p.get_d();
  return -x * std::log(x);
}

double entropy_of(std::span<const Rational> weights) {
  long double h = 0.0L;
  for (const auto& w : weights) h += entropy_term(w);
  return static_cast<double>(h);
}

BigInt common_denominator(std::span<const Rational> values) {
  BigInt l = 1;
  for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return l;
}

}  // namespace arrowc
