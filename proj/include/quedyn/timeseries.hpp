#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace quedyn {

/// Column-oriented record of one propagation. Population rows carry one entry
/// per recorded time; `state_labels[k]` is the singlet index of row k. The
/// `dipole_estimate` column is filled only by the sampled Hadamard engine and
/// is empty otherwise. Under a CAP, `norm` holds the surviving squared norm
/// and populations are not renormalized.
struct TimeSeries {
    std::vector<double> times;
    std::vector<std::array<double, 3>> field;
    std::vector<double> norm;
    std::vector<double> dipole;
    std::vector<double> dipole_estimate;
    std::vector<int> state_labels;
    std::vector<std::vector<double>> populations;  // [state][time index]

    std::size_t size() const { return times.size(); }

    void check_consistent() const {
        std::size_t n = times.size();
        if (field.size() != n || norm.size() != n || dipole.size() != n)
            throw std::logic_error("time series columns have unequal lengths");
        if (!dipole_estimate.empty() && dipole_estimate.size() != n)
            throw std::logic_error("dipole_estimate column length mismatch");
        if (populations.size() != state_labels.size())
            throw std::logic_error("population rows and state labels mismatch");
        for (const auto& row : populations)
            if (row.size() != n) throw std::logic_error("population row length mismatch");
    }
};

}  // namespace quedyn
