#pragma once

#include "delgame/error.hpp"

namespace delgame {

enum class DeltaKind { Exponential, Deterministic, Erlang };

/// Law of the i.i.d. spacings between observation epochs.
struct DeltaLaw {
  DeltaKind kind = DeltaKind::Exponential;
  double rate = 1.0;  // Exponential / Erlang rate
  double spacing = 0.0;  // Deterministic spacing
  int shape = 1;  // Erlang shape

  static DeltaLaw exponential(double rate);
  static DeltaLaw deterministic(double spacing);
  static DeltaLaw erlang(int shape, double rate);

  double mean() const;

  /// Laplace-Stieltjes transform E[exp(-s * Delta)].
  Complex lst(Complex s) const;
};

/// Validated parameter set of one game.
struct GameParams {
  double lambda = 1.0;  // attack rate on player A
  double mu = 1.0;  // attack rate on player B
  DeltaLaw delta;
  long threshold_a = 1;  // cumulative casualties that defeat A
  long threshold_b = 1;  // cumulative casualties that defeat B

  /// The closed-form transform family needs exponential observation gaps.
  bool closed_form_capable() const {
    return delta.kind == DeltaKind::Exponential;
  }
};

/// Unchecked parameter bundle as read from a config file. Thresholds are kept
/// as doubles so integrality is part of validation, not parsing.
struct RawParams {
  double lambda = 0.0;
  double mu = 0.0;
  DeltaLaw delta;
  double threshold_a = 0.0;
  double threshold_b = 0.0;
};

/// Checks all domain constraints and returns the validated set.
/// Throws NonPositiveRate, NonIntegerThreshold or ThresholdTooSmall.
GameParams validate_params(const RawParams& raw);

/// Evaluation point of the joint transform: |u| <= 1, |v| <= 1, Re theta >= 0.
struct TransformQuery {
  Complex u, v, theta;
  TransformQuery(Complex u, Complex v, Complex theta);
};

}  // namespace delgame
