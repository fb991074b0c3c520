#include "delgame/params.hpp"

#include <cmath>
#include <string>

namespace delgame {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveRate: return "NonPositiveRate";
    case ErrorCode::NonIntegerThreshold: return "NonIntegerThreshold";
    case ErrorCode::ThresholdTooSmall: return "ThresholdTooSmall";
    case ErrorCode::InvalidQuery: return "InvalidQuery";
    case ErrorCode::NotClosedFormCapable: return "NotClosedFormCapable";
    case ErrorCode::SingularConstantTerm: return "SingularConstantTerm";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::PolesTooClose: return "PolesTooClose";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::NoCrossing: return "NoCrossing";
    case ErrorCode::MaxObservationsExceeded: return "MaxObservationsExceeded";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

DeltaLaw DeltaLaw::exponential(double rate) {
  DeltaLaw law;
  law.kind = DeltaKind::Exponential;
  law.rate = rate;
  return law;
}

DeltaLaw DeltaLaw::deterministic(double spacing) {
  DeltaLaw law;
  law.kind = DeltaKind::Deterministic;
  law.spacing = spacing;
  return law;
}

DeltaLaw DeltaLaw::erlang(int shape, double rate) {
  DeltaLaw law;
  law.kind = DeltaKind::Erlang;
  law.shape = shape;
  law.rate = rate;
  return law;
}

double DeltaLaw::mean() const {
  switch (kind) {
    case DeltaKind::Exponential: return 1.0 / rate;
    case DeltaKind::Deterministic: return spacing;
    case DeltaKind::Erlang: return shape / rate;
  }
  return 0.0;
}

Complex DeltaLaw::lst(Complex s) const {
  switch (kind) {
    case DeltaKind::Exponential:
      return rate / (rate + s);
    case DeltaKind::Deterministic:
      return std::exp(-spacing * s);
    case DeltaKind::Erlang: {
      Complex base = rate / (rate + s);
      Complex acc = 1.0;
      for (int i = 0; i < shape; ++i) acc *= base;
      return acc;
    }
  }
  return 0.0;
}

namespace {

bool is_integral(double x) { return std::isfinite(x) && std::floor(x) == x; }

void check_positive(double x, const std::string& name) {
  if (!(std::isfinite(x) && x > 0.0))
    fail(ErrorCode::NonPositiveRate, name + " must be a positive finite number");
}

long check_threshold(double x, const std::string& name) {
  if (!is_integral(x))
    fail(ErrorCode::NonIntegerThreshold, name + " must be an integer");
  if (x < 1.0)
    fail(ErrorCode::ThresholdTooSmall, name + " must be at least 1");
  if (x > 1e6)
    fail(ErrorCode::InvalidArgument, name + " is beyond the supported range");
  return static_cast<long>(x);
}

}  // namespace

GameParams validate_params(const RawParams& raw) {
  check_positive(raw.lambda, "lambda");
  check_positive(raw.mu, "mu");
  switch (raw.delta.kind) {
    case DeltaKind::Exponential:
      check_positive(raw.delta.rate, "delta rate");
      break;
    case DeltaKind::Deterministic:
      check_positive(raw.delta.spacing, "delta spacing");
      break;
    case DeltaKind::Erlang:
      check_positive(raw.delta.rate, "delta rate");
      if (raw.delta.shape < 1)
        fail(ErrorCode::NonPositiveRate, "erlang shape must be at least 1");
      break;
  }
  GameParams p;
  p.lambda = raw.lambda;
  p.mu = raw.mu;
  p.delta = raw.delta;
  p.threshold_a = check_threshold(raw.threshold_a, "threshold M");
  p.threshold_b = check_threshold(raw.threshold_b, "threshold N");
  return p;
}

TransformQuery::TransformQuery(Complex u_, Complex v_, Complex theta_)
    : u(u_), v(v_), theta(theta_) {
  constexpr double slack = 1e-9;  // admit unit-circle points up to rounding
  if (!(std::abs(u) <= 1.0 + slack))
    fail(ErrorCode::InvalidQuery, "|u| must be <= 1");
  if (!(std::abs(v) <= 1.0 + slack))
    fail(ErrorCode::InvalidQuery, "|v| must be <= 1");
  if (!(theta.real() >= -slack))
    fail(ErrorCode::InvalidQuery, "Re theta must be >= 0");
  if (!std::isfinite(theta.real()) || !std::isfinite(theta.imag()))
    fail(ErrorCode::InvalidQuery, "theta must be finite");
}

}  // namespace delgame
