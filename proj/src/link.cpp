#include "pogit/link.hpp"

#include <cmath>
#include <stdexcept>

#include "pogit/numeric.hpp"

namespace pogit {

LinkFunction LinkFunction::log_link() { return {LinkKind::Log, 0.0, 1.0}; }

LinkFunction LinkFunction::logit() { return {LinkKind::Logit, 0.0, 1.0}; }

LinkFunction LinkFunction::bounded_logit(double lo, double hi) {
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
    throw std::invalid_argument("bounded_logit: require 0 <= lo < hi <= 1");
  }
  if (lo == 0.0 && hi == 1.0) return logit();
  return {LinkKind::BoundedLogit, lo, hi};
}

double LinkFunction::inverse(double eta) const {
  switch (kind) {
    case LinkKind::Log:
      return std::exp(eta);
    case LinkKind::Logit:
      return expit(eta);
    case LinkKind::BoundedLogit:
      return lo + (hi - lo) * expit(eta);
  }
  return 0.0;
}

double LinkFunction::inverse_d1(double eta) const {
  switch (kind) {
    case LinkKind::Log:
      return std::exp(eta);
    case LinkKind::Logit: {
      const double s = expit(eta);
      return s * (1.0 - s);
    }
    case LinkKind::BoundedLogit: {
      const double s = expit(eta);
      return (hi - lo) * s * (1.0 - s);
    }
  }
  return 0.0;
}

double LinkFunction::inverse_d2(double eta) const {
  switch (kind) {
    case LinkKind::Log:
      return std::exp(eta);
    case LinkKind::Logit: {
      const double s = expit(eta);
      return s * (1.0 - s) * (1.0 - 2.0 * s);
    }
    case LinkKind::BoundedLogit: {
      const double s = expit(eta);
      return (hi - lo) * s * (1.0 - s) * (1.0 - 2.0 * s);
    }
  }
  return 0.0;
}

double LinkFunction::log_inverse(double eta) const {
  switch (kind) {
    case LinkKind::Log:
      return eta;
    case LinkKind::Logit:
      return log_expit(eta);
    case LinkKind::BoundedLogit:
      return std::log(lo + (hi - lo) * expit(eta));
  }
  return 0.0;
}

double LinkFunction::d1_over_value(double eta) const {
  switch (kind) {
    case LinkKind::Log:
      return 1.0;
    case LinkKind::Logit:
      return expit(-eta);  // 1 - expit(eta), exact in the left tail
    case LinkKind::BoundedLogit: {
      const double s = expit(eta);
      return (hi - lo) * s * (1.0 - s) / (lo + (hi - lo) * s);
    }
  }
  return 0.0;
}

double LinkFunction::d2_over_value(double eta) const {
  switch (kind) {
    case LinkKind::Log:
      return 1.0;
    case LinkKind::Logit: {
      const double s = expit(eta);
      return (1.0 - s) * (1.0 - 2.0 * s);
    }
    case LinkKind::BoundedLogit: {
      const double s = expit(eta);
      return (hi - lo) * s * (1.0 - s) * (1.0 - 2.0 * s) / (lo + (hi - lo) * s);
    }
  }
  return 0.0;
}

}  // namespace pogit
