#pragma once

#include "rescale/metrics.hpp"
#include "rescale/rescale.hpp"
#include "rescale/sgm.hpp"

// Straightforward single-threaded implementations of the parallel kernels.
// Kept as the reference the test suite compares the OpenMP paths against and
// as the baseline for the benchmark target. Written for clarity, not speed.
// Integer kernels and per-pixel maps must match the parallel path bit for
// bit; the metric reductions agree to 1e-12 (different summation grouping).

namespace rescale::serial {

sgm::CensusMap census_transform(const ImageU8& img, int window);

sgm::CostVolume matching_cost(const sgm::CensusMap& left, const sgm::CensusMap& right,
                              int max_disp, int census_window);

sgm::CostVolume sgm_aggregate(const sgm::CostVolume& cv, const sgm::SgmConfig& cfg);

RasterMap apply_scale(const RasterMap& disparity, const AffineScale& scale, const DepthCap& cap);

metrics::ImageMetrics evaluate_image(const RasterMap& pred, const RasterMap& gt,
                                     const metrics::EvalConfig& cfg);

} // namespace rescale::serial
