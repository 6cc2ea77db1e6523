#include "freeset/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <map>

namespace freeset {

void SlopeSystem::add_row(RowTag tag, std::vector<std::pair<int, Q>> entries, Q rhs) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, Q>> merged;
    for (auto& [c, v] : entries) {
        if (!merged.empty() && merged.back().first == c)
            merged.back().second += v;
        else
            merged.push_back({c, v});
    }
    std::erase_if(merged, [](const auto& e) { return e.second == 0; });
    rows.push_back(std::move(merged));
    b.push_back(std::move(rhs));
    tags.push_back(tag);
}

Q SlopeSystem::norm_inf() const {
    Q best = 0;
    for (const auto& row : rows) {
        Q s = 0;
        for (const auto& [c, v] : row) s += q_abs(v);
        best = q_max(best, s);
    }
    return best;
}

Q SlopeSystem::residual_inf(const std::vector<Q>& s) const {
    Q worst = 0;
    for (size_t r = 0; r < rows.size(); ++r) {
        Q acc = -b[r];
        for (const auto& [c, v] : rows[r]) acc += v * s[c];
        worst = q_max(worst, q_abs(acc));
    }
    return worst;
}

SolveOutcome solve_float(const SlopeSystem& sys, const SolveOptions& opts) {
    const int m = sys.m;
    require(static_cast<int>(sys.rows.size()) == m, "CountMismatch", "system is not square");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd b(m);
    for (int r = 0; r < m; ++r) {
        b(r) = sys.b[r].get_d();
        for (const auto& [c, v] : sys.rows[r]) A(r, c) = v.get_d();
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    double pivot_floor = (sys.norm_inf().get_d()) * opts.pivot_rel.get_d();
    int det_sign = lu.permutationP().determinant() > 0 ? 1 : -1;
    for (int i = 0; i < m; ++i) {
        double u = lu.matrixLU()(i, i);
        if (std::abs(u) <= pivot_floor)
            fail("SingularSystem", "pivot below threshold in float elimination");
        if (u < 0) det_sign = -det_sign;
    }
    Eigen::VectorXd x = lu.solve(b);
    // one round of iterative refinement against the exact residual
    std::vector<Q> xs(m);
    for (int i = 0; i < m; ++i) xs[i] = q_from_double(x(i));
    Eigen::VectorXd r(m);
    for (int i = 0; i < m; ++i) {
        Q acc = sys.b[i];
        for (const auto& [c, v] : sys.rows[i]) acc -= v * xs[c];
        r(i) = acc.get_d();
    }
    x += lu.solve(r);
    SolveOutcome out;
    out.slopes.resize(m);
    for (int i = 0; i < m; ++i) out.slopes[i] = q_from_double(x(i));
    out.det_sign = det_sign;
    out.residual = sys.residual_inf(out.slopes);
    Q bnorm = 0;
    for (const auto& v : sys.b) bnorm = q_max(bnorm, q_abs(v));
    Q limit = bnorm > 0 ? Q(opts.rtol * bnorm) : opts.rtol;
    if (out.residual > limit)
        fail("SingularSystem", "refined residual exceeds tolerance (ill-conditioned system)");
    return out;
}

SolveOutcome solve_rational(const SlopeSystem& sys) {
    const int m = sys.m;
    require(static_cast<int>(sys.rows.size()) == m, "CountMismatch", "system is not square");
    // rows as column->value maps for cheap fill-in
    std::vector<std::map<int, Q>> rows(m);
    std::vector<Q> rhs = sys.b;
    for (int r = 0; r < m; ++r)
        for (const auto& [c, v] : sys.rows[r]) rows[r][c] = v;

    std::vector<int> row_of_col(m, -1);
    std::vector<bool> used(m, false);
    int det_sign = 1;
    for (int col = 0; col < m; ++col) {
        int pick = -1;
        size_t best_nnz = 0;
        for (int r = 0; r < m; ++r) {
            if (used[r]) continue;
            auto it = rows[r].find(col);
            if (it == rows[r].end() || it->second == 0) continue;
            if (pick < 0 || rows[r].size() < best_nnz) {
                pick = r;
                best_nnz = rows[r].size();
            }
        }
        if (pick < 0) fail("SingularSystem", "zero pivot column in rational elimination");
        used[pick] = true;
        row_of_col[col] = pick;
        Q pivot = rows[pick][col];
        if (sign(pivot) < 0) det_sign = -det_sign;
        for (int r = 0; r < m; ++r) {
            if (used[r]) continue;
            auto it = rows[r].find(col);
            if (it == rows[r].end() || it->second == 0) continue;
            Q f = it->second / pivot;
            for (const auto& [c, v] : rows[pick]) {
                if (c == col) continue;
                Q& cell = rows[r][c];
                cell -= f * v;
                if (cell == 0) rows[r].erase(c);
            }
            rows[r].erase(col);
            rhs[r] -= f * rhs[pick];
        }
    }
    int swaps = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (row_of_col[i] > row_of_col[j]) ++swaps;
    if (swaps % 2 == 1) det_sign = -det_sign;
    SolveOutcome out;
    out.slopes.assign(m, Q(0));
    for (int col = m - 1; col >= 0; --col) {
        int r = row_of_col[col];
        Q acc = rhs[r];
        for (const auto& [c, v] : rows[r]) {
            if (c != col) acc -= v * out.slopes[c];
        }
        out.slopes[col] = acc / rows[r].at(col);
    }
    out.det_sign = det_sign;
    out.residual = 0;
    require(sys.residual_inf(out.slopes) == 0, "SingularSystem",
            "rational solve failed to null the residual");
    return out;
}

SolveOutcome solve_system(const SlopeSystem& sys, const SolveOptions& opts) {
    return opts.arithmetic == Arithmetic::Rational ? solve_rational(sys) : solve_float(sys, opts);
}

}  // namespace freeset
