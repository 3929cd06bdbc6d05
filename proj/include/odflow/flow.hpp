#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "odflow/network.hpp"

namespace odflow {

// Time-indexed nonnegative vectors: one row per entity (origin, link, OD
// pair or path), one column per sampling interval t in [t_begin, t_end].
// t may be nonpositive: origin flows start at 2 - tau_max.
struct FlowSeries {
    int t_begin = 1;
    Eigen::MatrixXd values;

    FlowSeries() = default;
    FlowSeries(int entities, int t_begin_, int t_end_)
        : t_begin(t_begin_), values(Eigen::MatrixXd::Zero(entities, t_end_ - t_begin_ + 1)) {
        if (t_end_ < t_begin_) throw std::invalid_argument("flow series: empty time range");
    }

    int entity_count() const { return static_cast<int>(values.rows()); }
    int t_end() const { return t_begin + static_cast<int>(values.cols()) - 1; }
    int col_of(int t) const { return t - t_begin; }
    bool covers(int t) const { return t >= t_begin && t <= t_end(); }

    Eigen::MatrixXd::ColXpr col(int t) { return values.col(col_of(t)); }
    Eigen::MatrixXd::ConstColXpr col(int t) const { return values.col(col_of(t)); }

    // Copy restricted to [lo, hi].
    FlowSeries window(int lo, int hi) const {
        if (lo < t_begin || hi > t_end() || hi < lo)
            throw std::invalid_argument("flow series: window out of range");
        FlowSeries out(entity_count(), lo, hi);
        out.values = values.middleCols(col_of(lo), hi - lo + 1);
        return out;
    }

    double min_value() const { return values.size() ? values.minCoeff() : 0.0; }
};

using PathFlowSeries = FlowSeries;  // rows follow PathSet::paths order

using SupportMask = std::vector<Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>>;

// Per-step (link x origin) proportions p[t](link, origin) together with the
// mask of entries allowed to be nonzero (speed constraint C4).
struct AssignmentTensor {
    std::vector<Eigen::MatrixXd> steps;
    SupportMask support;

    int tau_max() const { return static_cast<int>(steps.size()); }
    int link_count() const { return steps.empty() ? 0 : static_cast<int>(steps[0].rows()); }
    int origin_count() const { return steps.empty() ? 0 : static_cast<int>(steps[0].cols()); }
};

// Per-step (link x OD pair) proportions.
struct ODAssignment {
    std::vector<Eigen::MatrixXd> steps;

    int tau_max() const { return static_cast<int>(steps.size()); }
};

// support[tau](link, origin) is true iff some enumerated path from that
// origin crosses the link at trip step tau+1. Under the rigid model this is
// exactly the set of entries an assignment tensor may use; in particular
// links leaving the origin are allowed at step 1 only.
inline SupportMask rigid_support(const Network& net, const PathSet& paths) {
    SupportMask mask(paths.tau_max);
    for (auto& m : mask) m.setConstant(net.link_count(), paths.origin_count(), false);
    for (const Path& p : paths.paths) {
        const int oi = paths.origin_index(p.origin());
        for (std::size_t step = 0; step < p.links.size(); ++step)
            mask[step](p.links[step], oi) = true;
    }
    return mask;
}

inline AssignmentTensor zero_tensor(const Network& net, const PathSet& paths) {
    AssignmentTensor tensor;
    tensor.support = rigid_support(net, paths);
    tensor.steps.assign(paths.tau_max,
                        Eigen::MatrixXd::Zero(net.link_count(), paths.origin_count()));
    return tensor;
}

// Link flows y^t = sum_tau P^tau x^(t-tau+1) on the requested interval.
inline FlowSeries forward_multi(const AssignmentTensor& P, const FlowSeries& x, int t_begin,
                                int t_end) {
    const int tau_max = P.tau_max();
    if (P.origin_count() != x.entity_count())
        throw std::invalid_argument("forward_multi: origin dimension mismatch");
    if (!x.covers(t_begin - tau_max + 1) || !x.covers(t_end))
        throw std::invalid_argument("forward_multi: x does not span the needed intervals");
    FlowSeries y(P.link_count(), t_begin, t_end);
    for (int t = t_begin; t <= t_end; ++t)
        for (int tau = 1; tau <= tau_max; ++tau)
            y.col(t) += P.steps[tau - 1] * x.col(t - tau + 1);
    return y;
}

namespace detail {

// Weighted column average with a caller-supplied fallback when the total
// weight vanishes. The assignment is fixed over the horizon, so weights are
// whole-horizon flow totals.
inline void weighted_average_columns(const std::vector<int>& members,
                                     const std::vector<double>& weights, double weight_total,
                                     const std::vector<Eigen::MatrixXd>& source,
                                     std::vector<Eigen::MatrixXd>& dest, int dest_col) {
    for (std::size_t tau = 0; tau < dest.size(); ++tau) {
        for (std::size_t m = 0; m < members.size(); ++m) {
            if (weights[m] == 0.0) continue;
            dest[tau].col(dest_col) += (weights[m] / weight_total) * source[tau].col(members[m]);
        }
    }
}

}  // namespace detail

// OD flows by summation over each pair's paths, and the per-step OD
// assignment as flow-weighted fractions of the incident paths. Pairs whose
// flow is identically zero get uniform path weights, which keeps the
// assignment well-defined without affecting any link flow.
inline std::pair<FlowSeries, ODAssignment> path_to_od(const Network& net, const PathSet& paths,
                                                      const PathFlowSeries& path_flows) {
    if (path_flows.entity_count() != static_cast<int>(paths.paths.size()))
        throw std::invalid_argument("path_to_od: path flow rows mismatch");
    FlowSeries od_flows(paths.od_count(), path_flows.t_begin, path_flows.t_end());
    ODAssignment A;
    A.steps.assign(paths.tau_max, Eigen::MatrixXd::Zero(net.link_count(), paths.od_count()));

    for (int od = 0; od < paths.od_count(); ++od) {
        const auto& members = paths.paths_of_od[od];
        double total = 0.0;
        std::vector<double> weight(members.size());
        for (std::size_t m = 0; m < members.size(); ++m) {
            od_flows.values.row(od) += path_flows.values.row(members[m]);
            weight[m] = path_flows.values.row(members[m]).sum();
            total += weight[m];
        }
        if (total <= 0.0) {
            weight.assign(members.size(), 1.0);
            total = static_cast<double>(members.size());
        }
        for (std::size_t m = 0; m < members.size(); ++m) {
            const Path& p = paths.paths[members[m]];
            for (std::size_t step = 0; step < p.links.size(); ++step)
                A.steps[step](p.links[step], od) += weight[m] / total;
        }
    }
    return {std::move(od_flows), std::move(A)};
}

// O-flows as row sums over destinations, and the O-flow tensor as the
// OD-flow-weighted average of the OD assignment columns. An origin whose
// flow is identically zero falls back to a uniform split over its step-1
// support so the result still satisfies the observability constraint.
inline std::pair<FlowSeries, AssignmentTensor> od_to_oflow(const Network& net,
                                                           const PathSet& paths,
                                                           const FlowSeries& od_flows,
                                                           const ODAssignment& A) {
    if (od_flows.entity_count() != paths.od_count())
        throw std::invalid_argument("od_to_oflow: od flow rows mismatch");
    if (A.tau_max() != paths.tau_max)
        throw std::invalid_argument("od_to_oflow: assignment step count mismatch");
    FlowSeries x(paths.origin_count(), od_flows.t_begin, od_flows.t_end());
    AssignmentTensor tensor = zero_tensor(net, paths);

    for (int oi = 0; oi < paths.origin_count(); ++oi) {
        const auto& members = paths.ods_of_origin[oi];
        double total = 0.0;
        std::vector<double> weight(members.size());
        for (std::size_t m = 0; m < members.size(); ++m) {
            x.values.row(oi) += od_flows.values.row(members[m]);
            weight[m] = od_flows.values.row(members[m]).sum();
            total += weight[m];
        }
        if (total > 0.0) {
            detail::weighted_average_columns(members, weight, total, A.steps, tensor.steps, oi);
        } else {
            const int origin = paths.origins[oi];
            const auto& out = net.out_links(origin);
            std::vector<int> allowed;
            for (int li : out)
                if (tensor.support[0](li, oi)) allowed.push_back(li);
            for (int li : allowed)
                tensor.steps[0](li, oi) = 1.0 / static_cast<double>(allowed.size());
        }
    }
    return {std::move(x), std::move(tensor)};
}

namespace detail {

// Net absorption at d for flows from origin column oi:
// sum_tau (inflow of d) - sum_tau (outflow of d).
inline double net_absorption(const AssignmentTensor& P, const Network& net, int oi, int d) {
    double w = 0.0;
    for (int tau = 0; tau < P.tau_max(); ++tau) {
        for (int li = 0; li < net.link_count(); ++li) {
            if (net.link(li).head == d) w += P.steps[tau](li, oi);
            if (net.link(li).tail == d) w -= P.steps[tau](li, oi);
        }
    }
    return w;
}

}  // namespace detail

// Single-step OD recovery: s_od = x_o (sum_i p_id,o - sum_j p_dj,o).
inline FlowSeries oflow_to_od_single(const FlowSeries& x, const AssignmentTensor& P,
                                     const Network& net, const PathSet& paths) {
    if (P.tau_max() != 1) throw std::invalid_argument("oflow_to_od_single: tensor must be single-step");
    FlowSeries s(paths.od_count(), x.t_begin, x.t_end());
    for (int od = 0; od < paths.od_count(); ++od) {
        const auto [o, d] = paths.od_pairs[od];
        const int oi = paths.origin_index(o);
        s.values.row(od) = detail::net_absorption(P, net, oi, d) * x.values.row(oi);
    }
    return s;
}

// Multi-step OD recovery on [t_begin, t_end]:
// s_od^t = x_o^t (sum_tau sum_i p^tau_id,o - sum_tau sum_j p^tau_dj,o).
// When the tensor satisfies the flow constraint the recovered values cannot
// be meaningfully negative; violations beyond tolerance indicate an
// infeasible tensor and are rejected.
inline FlowSeries oflow_to_od_multi(const FlowSeries& x, const AssignmentTensor& P,
                                    const Network& net, const PathSet& paths, int t_begin,
                                    int t_end, double negativity_tol = 1e-6) {
    if (!x.covers(t_begin) || !x.covers(t_end))
        throw std::invalid_argument("oflow_to_od_multi: requested range outside x");
    FlowSeries s(paths.od_count(), t_begin, t_end);
    const double scale = std::max(1.0, x.values.size() ? x.values.cwiseAbs().maxCoeff() : 0.0);
    for (int od = 0; od < paths.od_count(); ++od) {
        const auto [o, d] = paths.od_pairs[od];
        const int oi = paths.origin_index(o);
        const double w = detail::net_absorption(P, net, oi, d);
        s.values.row(od) =
            w * x.values.row(oi).segment(x.col_of(t_begin), t_end - t_begin + 1);
    }
    if (negativity_tol > 0.0 && s.min_value() < -negativity_tol * scale)
        throw std::runtime_error("oflow_to_od_multi: recovered OD flow negative beyond tolerance");
    return s;
}

inline FlowSeries oflow_to_od_multi(const FlowSeries& x, const AssignmentTensor& P,
                                    const Network& net, const PathSet& paths) {
    return oflow_to_od_multi(x, P, net, paths, x.t_begin, x.t_end());
}

// Sorted distinct destinations of the OD pairs; column order of D-flow
// tensors and series.
inline std::vector<int> destinations(const PathSet& paths) {
    std::vector<int> dests;
    for (const auto& od : paths.od_pairs) dests.push_back(od.second);
    std::sort(dests.begin(), dests.end());
    dests.erase(std::unique(dests.begin(), dests.end()), dests.end());
    return dests;
}

// Destination-side mirror of the multi-step recovery. xd columns are flows
// terminating per node (arrival indexed at the first interval after the
// trip completes); pd[tau] holds the proportion of the D-flow crossing a
// link tau steps before arrival. Output interval t runs over departures:
// s_od^t = sum_tau xd_d^(t+tau) (sum_j p^tau_oj,d - sum_i p^tau_io,d).
inline FlowSeries dflow_to_od(const FlowSeries& xd, const AssignmentTensor& Pd,
                              const Network& net, const PathSet& paths, int t_begin, int t_end) {
    const int tau_max = Pd.tau_max();
    if (!xd.covers(t_begin + 1) || !xd.covers(t_end + tau_max))
        throw std::invalid_argument("dflow_to_od: xd does not span the needed intervals");
    const std::vector<int> dests = destinations(paths);
    if (Pd.origin_count() != static_cast<int>(dests.size()) ||
        xd.entity_count() != static_cast<int>(dests.size()))
        throw std::invalid_argument("dflow_to_od: destination dimension mismatch");
    std::map<int, int> dest_index;
    for (int i = 0; i < static_cast<int>(dests.size()); ++i) dest_index[dests[i]] = i;

    FlowSeries s(paths.od_count(), t_begin, t_end);
    for (int od = 0; od < paths.od_count(); ++od) {
        const auto [o, d] = paths.od_pairs[od];
        const int di = dest_index.at(d);
        for (int tau = 1; tau <= tau_max; ++tau) {
            double w = 0.0;
            for (int li = 0; li < net.link_count(); ++li) {
                if (net.link(li).tail == o) w += Pd.steps[tau - 1](li, di);
                if (net.link(li).head == o) w -= Pd.steps[tau - 1](li, di);
            }
            if (w == 0.0) continue;
            for (int t = t_begin; t <= t_end; ++t) s.values(od, s.col_of(t)) += w * xd.values(di, xd.col_of(t + tau));
        }
    }
    return s;
}

// Worst-case violations of Constraints C2-C5 for a tensor (flows have only
// C1, checked by FlowSeries::min_value). All quantities are reported as
// nonnegative magnitudes; zero means satisfied exactly.
struct TensorFeasibility {
    double box = 0.0;      // C2: distance of entries from [0, 1]
    double support = 0.0;  // C4: largest magnitude off the support
    double mass = 0.0;     // C3: |sum of leaving-origin proportions - 1|
    double flow = 0.0;     // C5: outflow at step t minus inflow at step t-1

    bool ok(double eq_tol, double ineq_tol) const {
        return box <= ineq_tol && support <= eq_tol && mass <= eq_tol && flow <= ineq_tol;
    }
    double worst() const { return std::max(std::max(box, support), std::max(mass, flow)); }
};

inline TensorFeasibility check_tensor(const AssignmentTensor& P, const Network& net,
                                      const PathSet& paths) {
    TensorFeasibility r;
    const int tau_max = P.tau_max();
    for (int tau = 0; tau < tau_max; ++tau) {
        for (int li = 0; li < net.link_count(); ++li) {
            for (int oi = 0; oi < paths.origin_count(); ++oi) {
                const double v = P.steps[tau](li, oi);
                r.box = std::max(r.box, std::max(-v, v - 1.0));
                if (!P.support[tau](li, oi)) r.support = std::max(r.support, std::abs(v));
            }
        }
    }
    for (int oi = 0; oi < paths.origin_count(); ++oi) {
        const int origin = paths.origins[oi];
        double mass = 0.0;
        for (int tau = 0; tau < tau_max; ++tau)
            for (int li : net.out_links(origin)) mass += P.steps[tau](li, oi);
        r.mass = std::max(r.mass, std::abs(mass - 1.0));
        // Rigid flow constraint per node and step; step 1 is structural
        // (support allows no outflow from i != origin there).
        for (int t = 2; t <= tau_max; ++t) {
            Eigen::VectorXd inflow = Eigen::VectorXd::Zero(net.node_count());
            Eigen::VectorXd outflow = Eigen::VectorXd::Zero(net.node_count());
            for (int li = 0; li < net.link_count(); ++li) {
                inflow(net.link(li).head) += P.steps[t - 2](li, oi);
                outflow(net.link(li).tail) += P.steps[t - 1](li, oi);
            }
            for (int node = 0; node < net.node_count(); ++node) {
                if (node == origin) continue;
                r.flow = std::max(r.flow, outflow(node) - inflow(node));
            }
        }
    }
    return r;
}

}  // namespace odflow
