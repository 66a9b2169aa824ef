#pragma once

// A complete velocity-level safety design: system, obstacles, nominal law and
// filter. Evaluating it at a state gives the filtered command u*(x); the same
// evaluation runs on AD scalars for the feedforward terms.

#include "smoothsafe/filters.hpp"
#include "smoothsafe/model.hpp"

#include <limits>
#include <vector>

namespace smoothsafe {

struct SafetyDesign {
  ControlAffineSystem system = ControlAffineSystem::single_integrator(2);
  std::vector<Barrier> barriers;
  ProportionalNominal nominal;
  FilterConfig filter;

  template <class T>
  FilterResultT<T> evaluate_t(const VecT<T>& x) const;

  FilterOutput evaluate(const StateVec& x) const { return to_output(evaluate_t<double>(x)); }
  ControlVec command(const StateVec& x) const { return evaluate_t<double>(x).u_star; }

  // Barrier values h_i(x), one per obstacle.
  std::vector<double> barrier_values(const StateVec& x) const;
};

template <class T>
FilterResultT<T> SafetyDesign::evaluate_t(const VecT<T>& x) const {
  const VecT<T> u0 = nominal(x);
  if (barriers.empty()) {
    return FilterResultT<T>{u0, VecT<T>::Zero(u0.size()), T(std::numeric_limits<double>::infinity()),
                            T(0.0), T(0.0)};
  }
  if (barriers.size() == 1) {
    const LieDataT<T> lie = lie_derivatives_t(system, barriers.front(), x);
    const T h = barriers.front().value(x);
    switch (filter.kind) {
      case FilterKind::ClassicalQP:
      case FilterKind::GatedQP:
        return detail::gated(filter, lie, h, u0);
      case FilterKind::Penalty:
        return detail::penalty(filter, lie, h, u0);
      case FilterKind::StabilizedPenalty:
        return detail::stabilized(filter, lie, h, u0);
    }
  }
  if (!is_smooth(filter.kind))
    throw ConfigError("obstacles", "QP filters support a single obstacle; use a penalty kind for several");
  std::vector<LieDataT<T>> lies;
  std::vector<T> hs;
  lies.reserve(barriers.size());
  hs.reserve(barriers.size());
  for (const Barrier& b : barriers) {
    lies.push_back(lie_derivatives_t(system, b, x));
    hs.push_back(b.value(x));
  }
  return detail::multi_penalty<T>(filter, lies, hs, u0);
}

inline std::vector<double> SafetyDesign::barrier_values(const StateVec& x) const {
  std::vector<double> out;
  out.reserve(barriers.size());
  for (const Barrier& b : barriers) out.push_back(b.value(x));
  return out;
}

}  // namespace smoothsafe
