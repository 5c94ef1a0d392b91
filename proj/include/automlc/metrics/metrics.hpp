#ifndef AUTOMLC_METRICS_METRICS_HPP
#define AUTOMLC_METRICS_METRICS_HPP

#include <stdexcept>
#include <vector>

#include "automlc/core/matrix.hpp"

namespace automlc {

/// Mean over instances plus the per-instance values it averages.
struct MetricReport {
    double mean = 0.0;
    std::vector<double> per_instance;
};

/// Rank loss is reported both pair-normalized (the default in reports) and
/// raw. Instances without a (relevant, irrelevant) label pair contribute 0
/// and are flagged.
struct RankLossReport {
    double mean = 0.0;      // normalized
    double raw_mean = 0.0;  // unnormalized pair count
    std::vector<double> per_instance;
    std::vector<double> per_instance_raw;
    std::vector<std::uint8_t> degenerate;  // 1 where no pair existed
};

/// Fraction of instances whose predicted label vector differs anywhere.
MetricReport subset_zero_one(const BinaryMatrix& truth, const BinaryMatrix& pred);

/// Mean fraction of individually wrong label bits.
MetricReport hamming(const BinaryMatrix& truth, const BinaryMatrix& pred);

/// Instance-wise F-measure, averaged. The 0/0 case (both label sets empty)
/// counts as 1.
MetricReport instance_f_measure(const BinaryMatrix& truth, const BinaryMatrix& pred);

/// Incorrectly ordered (relevant, irrelevant) pairs, ties counting one half.
RankLossReport rank_loss(const BinaryMatrix& truth, const Matrix& scores);

}  // namespace automlc

#endif
