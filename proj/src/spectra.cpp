#include "densecode/spectra.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace densecode {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::NotSorted: return "NotSorted";
    case ErrorKind::NegativeCoefficient: return "NegativeCoefficient";
    case ErrorKind::InvalidDimension: return "InvalidDimension";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidMessageCount: return "InvalidMessageCount";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::CompletenessViolation: return "CompletenessViolation";
    case ErrorKind::LinearDependence: return "LinearDependence";
    case ErrorKind::BracketViolated: return "BracketViolated";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

SchmidtSpectrum SchmidtSpectrum::make(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::InvalidDimension, "empty spectrum");
  std::vector<double> v(values.begin(), values.end());
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorKind::NotNormalized, "non-finite coefficient");
    if (x < 0.0) throw Error(ErrorKind::NegativeCoefficient, "coefficient " + std::to_string(x));
  }
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) {
      std::ostringstream os;
      os << "lambda_" << i << " = " << v[i] << " exceeds lambda_" << i - 1 << " = " << v[i - 1];
      throw Error(ErrorKind::NotSorted, os.str());
    }
  }
  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "coefficients sum to " << sum;
    throw Error(ErrorKind::NotNormalized, os.str());
  }
  // A few ulps are left alone so that printed spectra read back bit-identical.
  if (std::abs(sum - 1.0) > 8.0 * std::numeric_limits<double>::epsilon()) {
    for (double& x : v) x /= sum;
  }
  return SchmidtSpectrum(std::move(v));
}

SchmidtSpectrum mes(int d) {
  if (d < 2) throw Error(ErrorKind::InvalidDimension, "MES needs d >= 2, got " + std::to_string(d));
  std::vector<double> v(static_cast<std::size_t>(d), 1.0 / d);
  return SchmidtSpectrum::make(v);
}

CMatrix lambda_matrix(const SchmidtSpectrum& s) {
  const int d = s.dim();
  CMatrix m = CMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) m(n, n) = s[n];
  return m;
}

CMatrix state_coefficients(const SchmidtSpectrum& s) {
  const int d = s.dim();
  CMatrix c = CMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) c(n, n) = std::sqrt(s[n]);
  return c;
}

SchmidtSpectrum interpolate(const SchmidtSpectrum& a, const SchmidtSpectrum& b, double t) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "interpolating spectra of different d");
  std::vector<double> v(static_cast<std::size_t>(a.dim()));
  for (int n = 0; n < a.dim(); ++n) v[static_cast<std::size_t>(n)] = (1.0 - t) * a[n] + t * b[n];
  // Rounding can break exact ties (e.g. lambda_1 = lambda_2 on both ends).
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1] && v[i] - v[i - 1] < 1e-15) v[i] = v[i - 1];
  }
  double sum = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= sum;
  return SchmidtSpectrum::make(v);
}

}  // namespace densecode
