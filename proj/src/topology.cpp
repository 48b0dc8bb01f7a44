#include "neuroring/topology.hpp"

#include <stdexcept>
#include <string>

namespace neuroring
{

void TopologyConfig::validate() const
{
    if (n_cores < 1)
        throw std::invalid_argument("topology needs at least one core");
    if (core_capacity < 1)
        throw std::invalid_argument("core capacity must be at least 1");
    if (!(dt > 0.0))
        throw std::invalid_argument("timestep must be positive");
    for (auto edge : device_boundaries)
        if (edge >= n_cores)
            throw std::invalid_argument("device boundary edge " + std::to_string(edge) + " outside the ring");
}

} // namespace neuroring
