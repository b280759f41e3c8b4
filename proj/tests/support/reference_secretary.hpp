#pragma once

// Straight transcription of the online formation loop over plain scores, kept
// deliberately separate from fogform::online_secretary so the two can be
// compared. Returns the stream positions (0-based) of accepted arrivals.

#include <cstddef>
#include <set>
#include <vector>

namespace fogform::testing {

inline std::vector<std::size_t> reference_secretary(const std::vector<double>& scores, std::size_t tau,
                                                    std::size_t J) {
    std::multiset<double> observed;
    std::size_t n = 0;
    // exploration
    while (observed.size() < tau && n < scores.size()) observed.insert(scores[n++]);
    if (observed.size() < tau) return {};
    // exploitation
    std::vector<std::size_t> chosen;
    while (chosen.size() < J && n < scores.size()) {
        const std::size_t arrival = n++;
        if (observed.empty()) {
            chosen.push_back(arrival);
            continue;
        }
        auto top = std::prev(observed.end());
        if (scores[arrival] > *top) {
            chosen.push_back(arrival);
            observed.erase(top);
        }
    }
    return chosen;
}

} // namespace fogform::testing
