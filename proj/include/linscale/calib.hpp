#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace linscale {

struct MarkerReading {
    double position = 0.0;  // vertical pixel position
    std::optional<double> value;
};

struct PairSlope {
    std::size_t i = 0, j = 0;  // i < j, indices into the readings
    double slope = 0.0;        // rounded to 4 decimals
    double exact = 0.0;        // unrounded
    double span = 0.0;         // |position_j - position_i|
};

struct LinearRelation {
    double slope = 0.0;
    double offset = 0.0;

    double operator()(double position) const { return slope * position + offset; }
};

/// Round half away from zero to `decimals` places.
double round_half_away(double v, int decimals);

/// Slopes of every pair of readings that both carry values. Pairs at the same
/// position are skipped and, when `coincident` is given, recorded there.
std::vector<PairSlope> pairwise_slopes(const std::vector<MarkerReading>& readings,
                                       std::vector<PairSlope>* coincident = nullptr);

struct Consensus {
    double slope = 0.0;
    std::vector<PairSlope> agreeing;  // pairs voting for the mode
    bool low_confidence = false;      // a single pair decided
};

/// Mode of the rounded slopes. With `rel_tol` > 0, slopes within that relative
/// distance of their sorted neighbour are pooled and the slope comes from the
/// widest pair of the winning pool.
Consensus consensus_slope(const std::vector<PairSlope>& slopes, double rel_tol = 0.0);

/// Offset from the agreeing reading with the largest position. Agreeing readings
/// are the largest set linked by mode-agreeing pairs.
LinearRelation fit_relation(const std::vector<MarkerReading>& readings, const Consensus& consensus);

/// Indices of the readings used by fit_relation, ascending.
std::vector<std::size_t> agreeing_readings(const Consensus& consensus);

double snap(double value, double grain);

std::vector<MarkerReading> correct_and_complete(const std::vector<double>& positions, const LinearRelation& rel,
                                                double grain);

/// 1 when every agreeing value is an integer, else the largest power of ten not
/// above the median value step between adjacent agreeing markers.
double default_grain(const std::vector<MarkerReading>& readings, const Consensus& consensus);

struct Calibration {
    std::vector<PairSlope> slopes;
    Consensus consensus;
    LinearRelation relation;
    double grain = 1.0;
    std::vector<MarkerReading> corrected;
};

Calibration calibrate(const std::vector<MarkerReading>& readings, double rel_tol = 0.0);

}  // namespace linscale
