#pragma once

#include "rosa/data/agent.hpp"
#include "rosa/data/csv.hpp"
#include "rosa/data/roundabout.hpp"

namespace rosa {

/// Aggregates each window of hz_in/hz_out source records per agent: mean of
/// position, speed and accelerations, circular mean of heading. Frames are
/// emitted for every window between the first and last record, so the
/// result is unit-spaced. Throws IncompatibleRates.
FrameSeries downsample(const RawTrajectorySet& raw, double hz_in, double hz_out = 1.0);

/// Labels every agent with the arm it leaves through, based on its final
/// position. VRUs and vehicles ending inside the circulating radius get -1.
FrameSeries infer_exit_labels(const FrameSeries& series, const RoundaboutGeometry& geo);

/// Splits a long recording into consecutive non-overlapping segments of
/// `length` frames; a trailing remainder shorter than `length` is dropped.
std::vector<FrameSeries> segment_series(const FrameSeries& series, std::size_t length);

}  // namespace rosa
