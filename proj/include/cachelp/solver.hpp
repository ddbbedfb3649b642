#ifndef CACHELP_SOLVER_HPP
#define CACHELP_SOLVER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cachelp/lpbuild.hpp"

namespace cachelp {

enum class SolveStatus : std::uint8_t { Optimal, Infeasible, Unbounded, IterLimit };
const char* solve_status_name(SolveStatus s);

struct RationalSolution {
    SolveStatus status = SolveStatus::Infeasible;
    Rat objective;
    std::vector<Rat> primal;  // one value per column
    std::vector<Rat> dual;    // one multiplier per row; 0 for rows never activated
    std::uint64_t iterations = 0;
    std::string note;  // diagnostic detail for infeasible/unbounded outcomes
};

struct SolverOptions {
    // Solve over a working subset of rows, activating violated ones on demand.
    // The result is certified against the full row set either way.
    bool lazy_rows = true;
    // On larger instances a double-precision pass first locates the binding
    // rows and a near-optimal basis; the exact run starts from there. Every
    // reported number still comes from the exact run.
    bool float_warmstart = true;
    std::uint64_t max_iterations = UINT64_MAX;
    int refactor_interval = 100;
    bool log = false;
};

// Exact primal simplex over rationals: Dantzig pricing with Bland's rule as
// the anti-cycling safeguard, sparse LU basis factorization, deterministic
// pivot order for fixed input.
RationalSolution solve(const LPInstance& lp, const SolverOptions& opt = {});

struct CertificateReport {
    bool primal_feasible = false;
    bool dual_feasible = false;
    bool duality_gap_zero = false;
    std::string first_violation;

    bool pass() const { return primal_feasible && dual_feasible && duality_gap_zero; }
};

// Recomputes, in exact arithmetic, primal feasibility over every row and
// column bound, dual multiplier signs against row relations, the reduced-cost
// conditions, and primal objective = dual bound. The verified multipliers are
// a standalone converse proof.
CertificateReport verify_certificate(const LPInstance& lp, const RationalSolution& sol);

enum class ExportFormat : std::uint8_t { LpText, Mps };

// Bit-deterministic text. Column names encode canonical subsets
// (h_W0_W1_Z0_Xd0012) plus the load column r. Rationals print as decimals when
// exact in 12 digits, otherwise as p/q comment plus a rounded decimal.
std::string export_lp(const LPInstance& lp, ExportFormat format);

}  // namespace cachelp

#endif
