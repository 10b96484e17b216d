#pragma once

#include <string>

#include "eps.hpp"
#include "factor.hpp"
#include "fp.hpp"
#include "monomial.hpp"
#include "poly.hpp"
#include "ratf.hpp"
#include "series.hpp"

namespace qw {

enum class Mode { probe, exact };

inline bool scalar_eq(const RatF& a, const RatF& b, Mode mode, int reps = 3, uint64_t seed = 7) {
    return mode == Mode::exact ? a == b : probe_equal(a, b, reps, seed);
}

// 1/zeta-free helpers shared by every module
template <class F>
F zeta_val(const Monomial& m) {
    F x = F::mono(m);
    F q1 = F::mono(Monomial::q1()), q2 = F::mono(Monomial::q2());
    return (F(1) - q1 * x) * (F(1) - q2 * x) / ((F(1) - x) * (F(1) - q1 * q2 * x));
}

inline std::string to_string(const RatF& a) { return a.str(); }
inline std::string to_string(const Fp& a) { return a.str(); }
inline std::string to_string(const Eps& a) { return a.str(); }

}  // namespace qw
