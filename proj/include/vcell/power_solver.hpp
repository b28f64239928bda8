#pragma once
// Continuous power allocation for one virtual cell.
//
// The cell's mixed-integer allocation problem is relaxed to continuous
// per-(user, bs, band) power components. The non-convex rate objective is
// handled by successive convex approximation: each log(1+z) term is bounded
// below by alpha*log(z) + beta, tight at the current SINR, and the resulting
// concave-in-log-power problem is driven to its KKT point by a fixed-point
// sweep with a per-user budget multiplier. Refitting alpha at the new
// operating point and repeating concentrates each user's per-band power onto
// a single BS, which recovers a channel assignment from the continuous
// solution.

#include <span>
#include <utility>
#include <vector>

#include "vcell/rate_core.hpp"
#include "vcell/tensor.hpp"

namespace vcell {

struct SolverSettings {
    int outer_max = 30;        // surrogate refits
    int inner_max = 200;       // fixed-point sweeps per refit
    double fp_tol = 1e-6;      // relative power / rate change tolerance
    double power_floor = 1e-12;// mW; sweeps clamp components up to this
    double lambda_tol = 1e-8;  // relative budget residual of the multiplier solve
    int freeze_after = 3;      // sweeps at the floor before a component is zeroed
    bool check_surrogate = false; // verify the bound at every refit (slow path)
    bool collect_trace = false;
};

// tangent-line coefficients of the lower bound log(1+z) >= a*log(z) + b,
// natural logs, with equality at z0
std::pair<double, double> alpha_beta(double z0);

struct SurrogateCoefficients {
    Tensor3 alpha;
    Tensor3 beta; // filled only when the surrogate check is enabled
};

// Smallest lambda >= 0 with sum_i num[i] / (lambda*ln2 + den[i]) <= budget.
// Returns 0 when the lambda = 0 sum already fits; otherwise bisects the
// strictly decreasing left-hand side until the residual is within
// tol * budget. Entries with num[i] == 0 are ignored; den[i] == 0 is allowed.
double solve_lambda(double budget, std::span<const double> num,
                    std::span<const double> den, double tol);

// One simultaneous update of every component from the current power state;
// each user's multiplier enforces its budget. Exposed for testing; the
// solver below runs this in a loop with floor/freeze bookkeeping.
Tensor3 fixed_point_sweep(const CellView& view, const Tensor3& power,
                          const Tensor3& alpha, double lambda_tol,
                          std::vector<double>* lambda_out = nullptr);

struct SolverTraceRow {
    int outer = 0;
    int sweeps = 0;
    double rate_bps = 0;
    double max_rel_change = 0;
    std::vector<double> lambda;
};

struct PowerSolveResult {
    Tensor3 power;
    double rate_bps = 0;        // component sum rate of the best iterate
    bool converged = false;
    int outer_iters = 0;
    Tensor3 alpha;              // surrogate coefficients active at `power`
    std::vector<double> lambda; // multipliers of the sweep that produced `power`
    double max_surrogate_violation = 0; // only meaningful with check_surrogate
    std::vector<SolverTraceRow> trace;
};

// Full solve. With init_gamma the surrogate starts from alpha = gamma
// (the power step of the alternating scheme); otherwise alpha starts at 1
// everywhere. init_user_band, when given, seeds the component powers by
// splitting each user's per-band power across its selected BSs.
PowerSolveResult solve_power_continuous(const CellView& view,
                                        const SolverSettings& settings,
                                        const ChannelAssignment* init_gamma = nullptr,
                                        const Matrix* init_user_band = nullptr);

// max_b p(u,b,k) / sum_b p(u,b,k) for every (user, band) with positive
// power; values near 1 mean the allocation is concentrated on one BS
std::vector<double> power_concentration(const Tensor3& power);

void write_solver_trace_csv(const std::vector<SolverTraceRow>& trace, std::ostream& out);

} // namespace vcell
