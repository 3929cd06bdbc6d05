#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "odflow/dct.hpp"
#include "odflow/flow.hpp"
#include "odflow/network.hpp"
#include "odflow/rng.hpp"

namespace odflow {

struct GenConfig {
    int tau_max = 4;
    int n_T = 60;
    int k = 5;                 // nonzero DCT coefficients per origin, DC included
    double coeff_range = 2.0;  // non-DC coefficients drawn from [-range, range]
    double flow_floor = 1.0;   // synthesized series never dips below this
    double dc_headroom = 1.0;  // extra uniform slack added on top of the floor
    double dc_cap = 1e6;       // redraw when the implied DC coefficient exceeds this
    std::uint64_t seed = 1;

    int series_length() const { return n_T + tau_max - 1; }

    void validate() const {
        if (n_T < 1 || tau_max < 1) throw std::invalid_argument("gen config: n_T and tau_max must be >= 1");
        if (k < 1 || k > series_length())
            throw std::invalid_argument("gen config: k must be in [1, n_T + tau_max - 1]");
        if (coeff_range <= 0.0 || flow_floor <= 0.0 || dc_headroom < 0.0 || dc_cap <= 0.0)
            throw std::invalid_argument("gen config: ranges must be positive");
    }
};

// One random assignment: a probability split over each origin's OD pairs, a
// split over each pair's paths, and the OD / O-flow tensors that follow from
// them through the conversion chain.
struct AssignmentDraw {
    AssignmentTensor tensor;
    ODAssignment od_assignment;
    std::vector<std::vector<double>> od_split;    // per origin, over ods_of_origin order
    std::vector<std::vector<double>> path_split;  // per OD pair, over paths_of_od order
};

// Origins draw independent streams derived from the seed, so generation is
// order-independent and reproducible per origin.
inline AssignmentDraw gen_assignment(const Network& net, const PathSet& paths,
                                     std::uint64_t seed) {
    if (paths.paths.empty()) throw std::invalid_argument("gen_assignment: empty path set");
    AssignmentDraw draw;
    draw.od_split.resize(paths.origin_count());
    draw.path_split.resize(paths.od_count());
    for (int oi = 0; oi < paths.origin_count(); ++oi) {
        Rng rng = Rng::derive(seed, 0x0D5117 + static_cast<std::uint64_t>(oi));
        draw.od_split[oi] = rng.simplex(paths.ods_of_origin[oi].size());
        for (int od : paths.ods_of_origin[oi])
            draw.path_split[od] = rng.simplex(paths.paths_of_od[od].size());
    }

    // Route the unit O-flow of every origin through its splits and collapse
    // with the conversion formulas; this is what keeps the tensors feasible.
    PathFlowSeries unit(static_cast<int>(paths.paths.size()), 1, 1);
    for (int oi = 0; oi < paths.origin_count(); ++oi) {
        const auto& ods = paths.ods_of_origin[oi];
        for (std::size_t m = 0; m < ods.size(); ++m) {
            const auto& members = paths.paths_of_od[ods[m]];
            for (std::size_t p = 0; p < members.size(); ++p)
                unit.values(members[p], 0) = draw.od_split[oi][m] * draw.path_split[ods[m]][p];
        }
    }
    auto [od_flows, A] = path_to_od(net, paths, unit);
    auto [x, tensor] = od_to_oflow(net, paths, od_flows, A);
    draw.od_assignment = std::move(A);
    draw.tensor = std::move(tensor);
    return draw;
}

// Per-origin series on [2 - tau_max, n_T] whose orthonormal-DCT coefficients
// have exactly k nonzeros. The DC coefficient is solved for so the series
// stays above the flow floor; a uniform headroom term keeps distinct draws
// from sharing the same minimum.
inline FlowSeries gen_sparse_oflows(const GenConfig& cfg, int n_origins, std::uint64_t seed) {
    cfg.validate();
    if (n_origins < 1) throw std::invalid_argument("gen_sparse_oflows: need at least one origin");
    const int n = cfg.series_length();
    const TransformMatrix tm = dct_matrix(n);
    FlowSeries x(n_origins, 2 - cfg.tau_max, cfg.n_T);

    constexpr int kMaxAttempts = 1000;
    for (int oi = 0; oi < n_origins; ++oi) {
        Rng rng = Rng::derive(seed, 0xF10A + static_cast<std::uint64_t>(oi));
        bool done = false;
        for (int attempt = 0; attempt < kMaxAttempts && !done; ++attempt) {
            Eigen::VectorXd coeff = Eigen::VectorXd::Zero(n);
            const auto picks = rng.sample_without_replacement(n - 1, cfg.k - 1);
            for (std::size_t j = 0; j < picks.size(); ++j) {
                double v = 0.0;
                while (v == 0.0) v = rng.uniform(-cfg.coeff_range, cfg.coeff_range);
                coeff(static_cast<int>(picks[j]) + 1) = v;
            }
            const Eigen::VectorXd ripple = synthesize(tm, coeff);
            const double headroom = rng.uniform(0.0, cfg.dc_headroom);
            const double dc = std::sqrt(static_cast<double>(n)) *
                              (cfg.flow_floor + headroom - ripple.minCoeff());
            if (dc == 0.0 || std::abs(dc) > cfg.dc_cap) continue;
            coeff(0) = dc;
            x.values.row(oi) = synthesize(tm, coeff).transpose();
            done = true;
        }
        if (!done)
            throw std::runtime_error("gen_sparse_oflows: no feasible draw, config ranges too tight");
    }
    return x;
}

struct GroundTruth {
    AssignmentDraw draw;
    FlowSeries x;           // origins, [2 - tau_max, n_T]
    FlowSeries od_flows;    // OD pairs, [2 - tau_max, n_T], straight from the splits
    FlowSeries link_flows;  // links, [1, n_T]
    PathFlowSeries path_flows;
};

inline GroundTruth gen_ground_truth(const Network& net, const PathSet& paths,
                                    const GenConfig& cfg) {
    cfg.validate();
    if (paths.tau_max != cfg.tau_max)
        throw std::invalid_argument("gen_ground_truth: path set tau_max differs from config");
    GroundTruth gt;
    gt.draw = gen_assignment(net, paths, splitmix64(cfg.seed ^ 0xA551));
    gt.x = gen_sparse_oflows(cfg, paths.origin_count(), splitmix64(cfg.seed ^ 0x0F10));

    // OD and path flows follow the splits directly; the tensor-based
    // recovery must reproduce them, which the tests check independently.
    gt.od_flows = FlowSeries(paths.od_count(), gt.x.t_begin, gt.x.t_end());
    gt.path_flows = PathFlowSeries(static_cast<int>(paths.paths.size()), gt.x.t_begin, gt.x.t_end());
    for (int oi = 0; oi < paths.origin_count(); ++oi) {
        const auto& ods = paths.ods_of_origin[oi];
        for (std::size_t m = 0; m < ods.size(); ++m) {
            const int od = ods[m];
            gt.od_flows.values.row(od) = gt.draw.od_split[oi][m] * gt.x.values.row(oi);
            const auto& members = paths.paths_of_od[od];
            for (std::size_t p = 0; p < members.size(); ++p)
                gt.path_flows.values.row(members[p]) =
                    gt.draw.path_split[od][p] * gt.od_flows.values.row(od);
        }
    }
    gt.link_flows = forward_multi(gt.draw.tensor, gt.x, 1, cfg.n_T);
    return gt;
}

}  // namespace odflow
