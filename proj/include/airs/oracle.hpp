#pragma once

#include "airs/reflection.hpp"

namespace airs {

/// Exhaustive grid search over phases and feasible amplitudes, independent of
/// the analytic optimizers. Refuses M > 3. The amplitude grid spans each
/// element's feasible range; for a total power budget the boundary-scaled
/// copy of every interior point is searched as well.
ReflectionConfig brute_force_oracle(const ChannelRealization& ch,
                                    const PowerModel& pm, double tx_power,
                                    const NoisePowers& noise,
                                    int grid_points_per_dim);

}  // namespace airs
