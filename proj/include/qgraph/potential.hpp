#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace qg {

enum class PotentialKind { zero, constant, piecewise, trig, table };

const char* to_string(PotentialKind kind);

/// Real potential q(x) on an edge [0, L].
///
/// Kinds:
///   zero, constant      q(x) = 0 or h
///   piecewise           breaks = {0 = x0 < x1 < ... < xn = L}, values has n
///                       entries; value i holds on [x_i, x_{i+1}) (last piece
///                       closed)
///   trig                q(x) = sum_k cos[k] cos(2 pi k x / P)
///                            + sum_{k>=1} sin[k-1] sin(2 pi k x / P),
///                       P defaults to L
///   table               piecewise constant on a uniform grid of n cells
///
/// Instances are immutable.
class Potential {
 public:
  static Potential zero(double length = 1.0);
  static Potential constant(double value, double length = 1.0);
  static Potential piecewise(std::vector<double> breaks, std::vector<double> values);
  static Potential trig(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
                        double length = 1.0, std::optional<double> period = std::nullopt);
  static Potential table(std::vector<double> values, double length = 1.0);

  PotentialKind kind() const { return kind_; }
  double length() const { return length_; }

  /// q(x); throws DomainError outside [0, L].
  double evaluate(double x) const;

  /// q~(x) = q(L - x).
  Potential reflect() const;

  /// (q+, q-) with q+ = (q + q~)/2 and q- = (q - q~)/2.
  std::pair<Potential, Potential> even_odd_parts() const;

  /// Restriction to [0, l] as a potential of length l.
  Potential head(double l) const;

  /// Same function on a different edge length. Only meaningful for the
  /// length-agnostic kinds (zero, constant); others throw unless L matches.
  Potential with_length(double length) const;

  /// Interior points where q may jump (piecewise and table kinds).
  std::vector<double> jump_points() const;

  /// A lower bound for q on [0, L].
  double lower_bound() const;

  double value() const { return value_; }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& cos_coeffs() const { return cos_; }
  const std::vector<double>& sin_coeffs() const { return sin_; }
  double period() const { return period_; }

  bool operator==(const Potential&) const = default;

 private:
  Potential() = default;
  Potential simplified() const;

  PotentialKind kind_ = PotentialKind::zero;
  double length_ = 1.0;
  double value_ = 0.0;
  std::vector<double> breaks_;
  std::vector<double> values_;
  std::vector<double> cos_;
  std::vector<double> sin_;
  double period_ = 1.0;
};

}  // namespace qg
