#pragma once

#include <span>
#include <vector>

namespace coval {

struct CurvePoint {
    double x = 0.0; // cumulative query points added
    double y = 0.0; // F1 score
};

struct ClassScore {
    int class_index = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool present_in_truths = false;
};

struct F1Report {
    std::vector<ClassScore> per_class;
    double macro_f1 = 0.0;
};

/// One-vs-rest precision/recall/F1 per class; any score whose denominator is
/// zero is reported as 0. macro_f1 averages only classes that occur in truths.
F1Report precision_recall_f1(std::span<const int> predictions, std::span<const int> truths);

double macro_f1(std::span<const int> predictions, std::span<const int> truths);

/// Trapezoid-rule area under the curve; x must be strictly increasing.
double trapezoid_auc(std::span<const CurvePoint> curve);

/// 1 - H(labels)/ln(class_count) with natural-log entropy; 0 for a perfectly
/// balanced pool, 1 for a single-class pool.
double sampling_bias(std::span<const int> labels, int class_count);

/// (x - min)/(max - min). All-equal input is degenerate: every value maps to
/// 0.5 and a warning is written to stderr.
std::vector<double> min_max_normalize(std::span<const double> values);

double median(std::vector<double> values);

} // namespace coval
