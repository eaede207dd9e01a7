// Training/test record layout shared by the data pipeline and the network:
// five branch inputs, seven trunk inputs, two displacement targets, and the
// domain extent needed by the sine augmentation.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wsim/geometry.hpp"
#include "wsim/params.hpp"

namespace wsim {

struct DataRecord {
    std::array<double, 5> branch{};  // D_F, chi_F, D_c, k_F, a_c_I
    std::array<double, 7> trunk{};   // t, x, y, y_cut, x_m, y_m, x_cut
    std::array<double, 2> target{};  // u1, u2 in cm
    std::array<double, 2> extent{};  // x_l, y_l in cm
};

struct SimProvenance {
    int sim_index = 0;
    WoundGeometry geometry;
    VariableParams params;
    int n_records = 0;
};

struct Dataset {
    std::vector<DataRecord> records;
    std::uint64_t seed = 0;
    std::string scenario;  // "train", "convex", "year-s1", ...
    std::vector<SimProvenance> provenance;
    std::vector<int> train_indices;  // populated by split_dataset
    std::vector<int> val_indices;

    std::size_t size() const { return records.size(); }
};

}  // namespace wsim
