#pragma once

namespace pogit {

enum class LinkKind { Log, Logit, BoundedLogit };

/// Inverse-link evaluation for the two model blocks. The rate uses Log; the
/// reporting probability uses Logit or BoundedLogit, whose inverse
/// lo + (hi - lo) * expit(eta) confines p to (lo, hi). Requesting bounds
/// (0, 1) collapses to the plain logit.
struct LinkFunction {
  LinkKind kind = LinkKind::Logit;
  double lo = 0.0;
  double hi = 1.0;

  static LinkFunction log_link();
  static LinkFunction logit();
  /// Requires 0 <= lo < hi <= 1.
  static LinkFunction bounded_logit(double lo, double hi);

  /// Inverse link value at a linear predictor.
  double inverse(double eta) const;
  /// d/d eta of the inverse link.
  double inverse_d1(double eta) const;
  /// d^2/d eta^2 of the inverse link.
  double inverse_d2(double eta) const;
  /// log(inverse(eta)), computed without underflow for the logit family.
  double log_inverse(double eta) const;
  /// inverse_d1 / inverse, algebraically simplified where possible.
  double d1_over_value(double eta) const;
  /// inverse_d2 / inverse.
  double d2_over_value(double eta) const;
};

}  // namespace pogit
