#include "coval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace coval {

F1Report precision_recall_f1(std::span<const int> predictions, std::span<const int> truths) {
    if (predictions.size() != truths.size()) {
        throw std::invalid_argument("predictions and truths differ in length");
    }
    if (truths.empty()) throw std::invalid_argument("cannot score an empty prediction set");

    int max_class = 0;
    for (int c : predictions) max_class = std::max(max_class, c);
    for (int c : truths) max_class = std::max(max_class, c);
    const int n_classes = max_class + 1;

    std::vector<long> tp(n_classes, 0), fp(n_classes, 0), fn(n_classes, 0);
    std::vector<char> in_truths(n_classes, 0);
    for (size_t i = 0; i < truths.size(); ++i) {
        const int p = predictions[i];
        const int t = truths[i];
        if (p < 0 || t < 0) throw std::invalid_argument("class indices must be non-negative");
        in_truths[static_cast<size_t>(t)] = 1;
        if (p == t) {
            ++tp[static_cast<size_t>(t)];
        } else {
            ++fp[static_cast<size_t>(p)];
            ++fn[static_cast<size_t>(t)];
        }
    }

    F1Report report;
    report.per_class.reserve(static_cast<size_t>(n_classes));
    double macro_sum = 0.0;
    int macro_count = 0;
    for (int c = 0; c < n_classes; ++c) {
        const size_t cu = static_cast<size_t>(c);
        ClassScore score;
        score.class_index = c;
        score.present_in_truths = in_truths[cu] != 0;
        const long p_den = tp[cu] + fp[cu];
        const long r_den = tp[cu] + fn[cu];
        score.precision = p_den > 0 ? static_cast<double>(tp[cu]) / static_cast<double>(p_den) : 0.0;
        score.recall = r_den > 0 ? static_cast<double>(tp[cu]) / static_cast<double>(r_den) : 0.0;
        const double f_den = score.precision + score.recall;
        score.f1 = f_den > 0.0 ? 2.0 * score.precision * score.recall / f_den : 0.0;
        if (score.present_in_truths) {
            macro_sum += score.f1;
            ++macro_count;
        }
        report.per_class.push_back(score);
    }
    report.macro_f1 = macro_sum / static_cast<double>(macro_count);
    return report;
}

double macro_f1(std::span<const int> predictions, std::span<const int> truths) {
    return precision_recall_f1(predictions, truths).macro_f1;
}

double trapezoid_auc(std::span<const CurvePoint> curve) {
    if (curve.size() < 2) throw std::invalid_argument("a curve needs at least two points");
    double area = 0.0;
    for (size_t i = 0; i + 1 < curve.size(); ++i) {
        const double dx = curve[i + 1].x - curve[i].x;
        if (dx <= 0.0) throw std::invalid_argument("curve x values must be strictly increasing");
        area += dx * (curve[i].y + curve[i + 1].y) * 0.5;
    }
    return area;
}

double sampling_bias(std::span<const int> labels, int class_count) {
    if (labels.empty()) throw std::invalid_argument("sampling bias of an empty pool is undefined");
    if (class_count < 2) {
        throw std::invalid_argument("sampling bias needs at least two classes");
    }
    std::vector<long> counts(static_cast<size_t>(class_count), 0);
    for (int c : labels) {
        if (c < 0 || c >= class_count) throw std::invalid_argument("class index out of range");
        ++counts[static_cast<size_t>(c)];
    }
    const double total = static_cast<double>(labels.size());
    double entropy = 0.0;
    for (long count : counts) {
        if (count == 0) continue; // 0·log 0 ≡ 0
        const double p = static_cast<double>(count) / total;
        entropy -= p * std::log(p);
    }
    const double bias = 1.0 - entropy / std::log(static_cast<double>(class_count));
    return std::clamp(bias, 0.0, 1.0);
}

std::vector<double> min_max_normalize(std::span<const double> values) {
    if (values.size() < 2) throw std::invalid_argument("normalization needs at least two values");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    std::vector<double> out(values.size());
    if (lo == hi) {
        std::cerr << "warning: all values equal in min-max normalization; returning 0.5\n";
        std::fill(out.begin(), out.end(), 0.5);
        return out;
    }
    const double range = hi - lo;
    for (size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / range;
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty set is undefined");
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace coval
