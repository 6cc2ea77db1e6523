#pragma once

#include "freeset/rational.hpp"

#include <string>
#include <vector>

namespace freeset {

enum class Arithmetic { Float, Rational };

struct SolveOptions {
    Arithmetic arithmetic = Arithmetic::Float;
    Q rtol = Q(1, 1000000000);           // residual, relative to ||b||_inf
    Q ctol = Q(1, 10000000);             // concurrency consistency, times bbox scale
    Q pivot_rel = Q(1, 1000000000000);   // pivot threshold, times ||A||_inf
};

struct RowTag {
    enum Kind { Concurrency, PropLambda, PropMu, Boundary } kind = Concurrency;
    int vertex = -1;  // constraint owner
    int edge = -1;    // boundary edge or the run edge e_k of a concurrency row
};

/// Sparse m x m system A s = b over exact rationals; rows carry tags so the
/// structure stays inspectable. b has exactly four nonzeros (boundary rows).
struct SlopeSystem {
    int m = 0;
    std::vector<std::vector<std::pair<int, Q>>> rows;  // sorted by column
    std::vector<Q> b;
    std::vector<RowTag> tags;

    void add_row(RowTag tag, std::vector<std::pair<int, Q>> entries, Q rhs);
    Q norm_inf() const;
    /// max_i |(A s - b)_i|
    Q residual_inf(const std::vector<Q>& s) const;
};

struct SolveOutcome {
    std::vector<Q> slopes;
    int det_sign = 0;  // sign of det A (exact in rational mode)
    Q residual = 0;
};

/// Dense LU with partial pivoting (Eigen) plus one round of exact-residual
/// iterative refinement. Pivot magnitudes below pivot_rel * ||A||_inf and
/// residuals above rtol * ||b||_inf raise SingularSystem.
SolveOutcome solve_float(const SlopeSystem& sys, const SolveOptions& opts);

/// Exact sparse Gaussian elimination with Markowitz-style pivoting; a zero
/// pivot column raises SingularSystem. Certifies det != 0.
SolveOutcome solve_rational(const SlopeSystem& sys);

SolveOutcome solve_system(const SlopeSystem& sys, const SolveOptions& opts);

}  // namespace freeset
