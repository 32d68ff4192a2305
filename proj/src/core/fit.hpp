#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace herzlab {

// Carrier for one-sided (C, delta) bounds: every sample satisfies
// v <= delta u + log C on log coordinates. violations must be 0 for a pass.
struct FitReport {
    double C = 1.0;
    double delta = 0.0;      // clamped value actually used downstream
    double delta_raw = 0.0;  // unclamped slope, for flagging
    double residual = 0.0;   // RMS slack of the cloud below the envelope
    int sample_count = 0;
    int envelope_violations = 0;
    bool delta_flagged = false;  // raw slope outside the clamp window
};

// Slope from a least-squares line through the upper concave hull of the
// (u, v) cloud, intercept then lifted so no sample violates the envelope.
// For collinear data this returns the exact line (C = 1 when it passes
// through the origin). delta is clamped into (delta_min, delta_max].
FitReport fit_upper_envelope(std::span<const double> u, std::span<const double> v,
                             double delta_min = 0.0, double delta_max = 1e9);

struct RatioRow {
    std::string function_id;
    int resolution = 0;  // points_per_unit
    int dict_size = 0;
    double input_norm = 0.0;
    double output_norm = 0.0;
    double ratio = 0.0;
};

// Carrier for boundedness experiments. refinement_growth compares the max
// ratio at the finest resolution against the coarsest.
struct RatioReport {
    std::vector<RatioRow> rows;
    double max_ratio = 0.0;
    double refinement_growth = 0.0;
    std::vector<std::string> skipped;  // zero-norm inputs, with note
    bool probe_mode = false;
    bool passed = false;
};

}  // namespace herzlab
