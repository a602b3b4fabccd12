/*
 * Copyright (C) 2026 The amdet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AMDET_METRICS_HPP
#define AMDET_METRICS_HPP

#include <cstdint>
#include <vector>

#include "amdet/common.hpp"

namespace amdet::eval {

// The malicious class (label 1) is the positive class.
struct ConfusionMatrix {
    std::int64_t tp = 0;
    std::int64_t tn = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + tn + fp + fn; }

    void add(int truth, int predicted) {
        if (truth == 1)
            (predicted == 1 ? tp : fn)++;
        else
            (predicted == 1 ? fp : tn)++;
    }
};

struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    // Division-by-zero cases report 0 and clear the matching flag.
    bool precision_defined = true;
    bool recall_defined = true;
    bool f1_defined = true;
};

inline Metrics compute_metrics(const ConfusionMatrix& cm) {
    std::int64_t total = cm.total();
    if (total <= 0) throw EmptyEvaluation("confusion matrix is empty");
    Metrics m;
    m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(total);
    if (cm.tp + cm.fp > 0) {
        m.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
    } else {
        m.precision = 0.0;
        m.precision_defined = false;
    }
    if (cm.tp + cm.fn > 0) {
        m.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    } else {
        m.recall = 0.0;
        m.recall_defined = false;
    }
    if (m.precision + m.recall > 0.0) {
        m.f1 = 2.0 * (m.precision * m.recall) / (m.precision + m.recall);
    } else {
        m.f1 = 0.0;
        m.f1_defined = false;
    }
    return m;
}

inline ConfusionMatrix confusion_from_predictions(const std::vector<int>& truth,
                                                  const std::vector<int>& predicted) {
    if (truth.size() != predicted.size())
        throw DimMismatch("prediction/label count mismatch");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], predicted[i]);
    return cm;
}

}  // namespace amdet::eval

#endif  // AMDET_METRICS_HPP
