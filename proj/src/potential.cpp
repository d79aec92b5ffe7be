#include "qgraph/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "qgraph/errors.hpp"

namespace qg {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(fmt::format("potential {} must be finite", what));
}

void require_length(double length) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw DomainError(fmt::format("potential length must be positive, got {}", length));
}

// Breaks closer than this (relative to L) are treated as the same point when
// merging a partition with its mirror image.
constexpr double kBreakSnap = 1e-14;

}  // namespace

const char* to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::constant: return "constant";
    case PotentialKind::piecewise: return "piecewise";
    case PotentialKind::trig: return "trig";
    case PotentialKind::table: return "table";
  }
  return "?";
}

Potential Potential::zero(double length) {
  require_length(length);
  Potential p;
  p.kind_ = PotentialKind::zero;
  p.length_ = length;
  return p;
}

Potential Potential::constant(double value, double length) {
  require_length(length);
  require_finite(value, "value");
  Potential p;
  p.kind_ = PotentialKind::constant;
  p.length_ = length;
  p.value_ = value;
  return p;
}

Potential Potential::piecewise(std::vector<double> breaks, std::vector<double> values) {
  if (breaks.size() < 2 || values.size() + 1 != breaks.size())
    throw DomainError("piecewise potential needs n+1 breaks for n values");
  if (breaks.front() != 0.0) throw DomainError("piecewise breaks must start at 0");
  for (double b : breaks) require_finite(b, "break");
  for (double v : values) require_finite(v, "value");
  for (std::size_t i = 1; i < breaks.size(); ++i)
    if (!(breaks[i] > breaks[i - 1]))
      throw DomainError("piecewise breaks must be strictly increasing");
  Potential p;
  p.kind_ = PotentialKind::piecewise;
  p.length_ = breaks.back();
  p.breaks_ = std::move(breaks);
  p.values_ = std::move(values);
  return p;
}

Potential Potential::trig(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
                          double length, std::optional<double> period) {
  require_length(length);
  for (double v : cos_coeffs) require_finite(v, "cos coefficient");
  for (double v : sin_coeffs) require_finite(v, "sin coefficient");
  Potential p;
  p.kind_ = PotentialKind::trig;
  p.length_ = length;
  p.period_ = period.value_or(length);
  require_length(p.period_);
  p.cos_ = std::move(cos_coeffs);
  p.sin_ = std::move(sin_coeffs);
  return p;
}

Potential Potential::table(std::vector<double> values, double length) {
  require_length(length);
  if (values.empty()) throw DomainError("table potential needs at least one value");
  for (double v : values) require_finite(v, "value");
  Potential p;
  p.kind_ = PotentialKind::table;
  p.length_ = length;
  p.values_ = std::move(values);
  return p;
}

double Potential::evaluate(double x) const {
  if (!(x >= 0.0 && x <= length_))
    throw DomainError(fmt::format("x = {} outside [0, {}]", x, length_));
  switch (kind_) {
    case PotentialKind::zero: return 0.0;
    case PotentialKind::constant: return value_;
    case PotentialKind::piecewise: {
      auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
      auto idx = static_cast<std::size_t>(std::distance(breaks_.begin(), it));
      idx = std::clamp<std::size_t>(idx, 1, values_.size());
      return values_[idx - 1];
    }
    case PotentialKind::trig: {
      const double theta = 2.0 * std::numbers::pi * x / period_;
      double q = 0.0;
      for (std::size_t k = 0; k < cos_.size(); ++k) q += cos_[k] * std::cos(theta * double(k));
      for (std::size_t k = 0; k < sin_.size(); ++k) q += sin_[k] * std::sin(theta * double(k + 1));
      return q;
    }
    case PotentialKind::table: {
      const auto n = values_.size();
      auto idx = static_cast<std::size_t>(std::floor(x / length_ * double(n)));
      return values_[std::min(idx, n - 1)];
    }
  }
  return 0.0;
}

Potential Potential::reflect() const {
  Potential r = *this;
  switch (kind_) {
    case PotentialKind::zero:
    case PotentialKind::constant: break;
    case PotentialKind::piecewise: {
      const auto n = breaks_.size();
      for (std::size_t i = 0; i < n; ++i) r.breaks_[i] = length_ - breaks_[n - 1 - i];
      r.breaks_.front() = 0.0;
      r.breaks_.back() = length_;
      std::reverse(r.values_.begin(), r.values_.end());
      break;
    }
    case PotentialKind::table: std::reverse(r.values_.begin(), r.values_.end()); break;
    case PotentialKind::trig: {
      // Shift by L: exact sign flip of the sine part when P == L.
      for (std::size_t k = 1; k <= std::max(cos_.size() - (cos_.empty() ? 0 : 1), sin_.size()); ++k) {
        const double ck = k < cos_.size() ? cos_[k] : 0.0;
        const double sk = k - 1 < sin_.size() ? sin_[k - 1] : 0.0;
        double C = 1.0;
        double S = 0.0;
        if (period_ != length_) {
          const double phase = 2.0 * std::numbers::pi * double(k) * length_ / period_;
          C = std::cos(phase);
          S = std::sin(phase);
        }
        if (k < r.cos_.size()) r.cos_[k] = ck * C + sk * S;
        if (k - 1 < r.sin_.size()) r.sin_[k - 1] = ck * S - sk * C;
        else if (ck * S != 0.0) {
          r.sin_.resize(k, 0.0);
          r.sin_[k - 1] = ck * S;
        }
        if (k >= r.cos_.size() && sk * S != 0.0) {
          r.cos_.resize(k + 1, 0.0);
          r.cos_[k] = sk * S;
        }
      }
      break;
    }
  }
  return r;
}

std::pair<Potential, Potential> Potential::even_odd_parts() const {
  switch (kind_) {
    case PotentialKind::zero:
    case PotentialKind::constant: return {*this, Potential::zero(length_)};
    case PotentialKind::table: {
      Potential even = *this;
      Potential odd = *this;
      const auto n = values_.size();
      for (std::size_t i = 0; i < n; ++i) {
        even.values_[i] = 0.5 * (values_[i] + values_[n - 1 - i]);
        odd.values_[i] = 0.5 * (values_[i] - values_[n - 1 - i]);
      }
      return {even.simplified(), odd.simplified()};
    }
    case PotentialKind::trig: {
      const Potential r = reflect();
      Potential even = *this;
      Potential odd = *this;
      const auto nc = std::max(cos_.size(), r.cos_.size());
      const auto ns = std::max(sin_.size(), r.sin_.size());
      even.cos_.assign(nc, 0.0);
      odd.cos_.assign(nc, 0.0);
      even.sin_.assign(ns, 0.0);
      odd.sin_.assign(ns, 0.0);
      auto at = [](const std::vector<double>& v, std::size_t i) { return i < v.size() ? v[i] : 0.0; };
      for (std::size_t k = 0; k < nc; ++k) {
        even.cos_[k] = 0.5 * (at(cos_, k) + at(r.cos_, k));
        odd.cos_[k] = 0.5 * (at(cos_, k) - at(r.cos_, k));
      }
      for (std::size_t k = 0; k < ns; ++k) {
        even.sin_[k] = 0.5 * (at(sin_, k) + at(r.sin_, k));
        odd.sin_[k] = 0.5 * (at(sin_, k) - at(r.sin_, k));
      }
      return {even.simplified(), odd.simplified()};
    }
    case PotentialKind::piecewise: {
      std::vector<double> merged = breaks_;
      for (double b : breaks_) merged.push_back(length_ - b);
      std::sort(merged.begin(), merged.end());
      std::vector<double> cuts{0.0};
      for (double b : merged)
        if (b - cuts.back() > kBreakSnap * length_) cuts.push_back(b);
      cuts.back() = length_;
      std::vector<double> even_vals;
      std::vector<double> odd_vals;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        const double q = evaluate(mid);
        const double qt = evaluate(length_ - mid);
        even_vals.push_back(0.5 * (q + qt));
        odd_vals.push_back(0.5 * (q - qt));
      }
      return {Potential::piecewise(cuts, even_vals).simplified(),
              Potential::piecewise(cuts, odd_vals).simplified()};
    }
  }
  return {*this, Potential::zero(length_)};
}

Potential Potential::head(double l) const {
  if (!(l > 0.0 && l <= length_))
    throw DomainError(fmt::format("cannot restrict potential of length {} to [0, {}]", length_, l));
  switch (kind_) {
    case PotentialKind::zero: return Potential::zero(l);
    case PotentialKind::constant: return Potential::constant(value_, l);
    case PotentialKind::trig: return Potential::trig(cos_, sin_, l, period_);
    case PotentialKind::table: {
      const auto n = values_.size();
      std::vector<double> br;
      for (std::size_t i = 0; i <= n; ++i) br.push_back(length_ * double(i) / double(n));
      return Potential::piecewise(br, values_).head(l);
    }
    case PotentialKind::piecewise: {
      std::vector<double> br{0.0};
      std::vector<double> vals;
      for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
        if (breaks_[i] >= l) break;
        vals.push_back(values_[i]);
        br.push_back(std::min(breaks_[i + 1], l));
      }
      br.back() = l;
      return Potential::piecewise(br, vals).simplified();
    }
  }
  return *this;
}

Potential Potential::with_length(double length) const {
  if (kind_ == PotentialKind::zero) return Potential::zero(length);
  if (kind_ == PotentialKind::constant) return Potential::constant(value_, length);
  if (std::abs(length - length_) > 1e-12 * std::max(1.0, length_))
    throw DomainError(fmt::format("{} potential has length {}, edge has length {}",
                                  to_string(kind_), length_, length));
  return *this;
}

std::vector<double> Potential::jump_points() const {
  std::vector<double> pts;
  if (kind_ == PotentialKind::piecewise) {
    pts.assign(breaks_.begin() + 1, breaks_.end() - 1);
  } else if (kind_ == PotentialKind::table) {
    const auto n = values_.size();
    for (std::size_t i = 1; i < n; ++i) pts.push_back(length_ * double(i) / double(n));
  }
  return pts;
}

double Potential::lower_bound() const {
  switch (kind_) {
    case PotentialKind::zero: return 0.0;
    case PotentialKind::constant: return value_;
    case PotentialKind::piecewise:
    case PotentialKind::table: return *std::min_element(values_.begin(), values_.end());
    case PotentialKind::trig: {
      double lb = cos_.empty() ? 0.0 : cos_[0];
      for (std::size_t k = 1; k < cos_.size(); ++k) lb -= std::abs(cos_[k]);
      for (double s : sin_) lb -= std::abs(s);
      return lb;
    }
  }
  return 0.0;
}

// Collapses degenerate representations so that e.g. the even part of a step
// comes out as a constant.
Potential Potential::simplified() const {
  auto all_equal = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  auto as_constant = [this](double h) {
    return h == 0.0 ? Potential::zero(length_) : Potential::constant(h, length_);
  };
  switch (kind_) {
    case PotentialKind::constant: return value_ == 0.0 ? Potential::zero(length_) : *this;
    case PotentialKind::table:
      return all_equal(values_) ? as_constant(values_.front()) : *this;
    case PotentialKind::trig: {
      bool flat = std::all_of(sin_.begin(), sin_.end(), [](double s) { return s == 0.0; });
      for (std::size_t k = 1; k < cos_.size(); ++k) flat = flat && cos_[k] == 0.0;
      return flat ? as_constant(cos_.empty() ? 0.0 : cos_[0]) : *this;
    }
    case PotentialKind::piecewise: {
      if (all_equal(values_)) return as_constant(values_.front());
      std::vector<double> br{breaks_.front()};
      std::vector<double> vals{values_.front()};
      for (std::size_t i = 1; i < values_.size(); ++i) {
        if (values_[i] == vals.back()) {
          continue;
        }
        br.push_back(breaks_[i]);
        vals.push_back(values_[i]);
      }
      br.push_back(length_);
      return Potential::piecewise(br, vals);
    }
    case PotentialKind::zero: return *this;
  }
  return *this;
}

}  // namespace qg
