#pragma once

#include <limits>
#include <string>

namespace swarm {

// Resource taxonomy.  The combination of access and lifecycle decides the
// claim semantics; the kind is descriptive.
enum class resource_kind { material, energy, information };
enum class resource_access { shared, exclusive };
enum class resource_lifecycle { consumable, renewable };

struct resource_spec {
  std::string name;
  resource_kind kind = resource_kind::material;
  resource_access access = resource_access::shared;
  resource_lifecycle lifecycle = resource_lifecycle::renewable;
  double quantity = std::numeric_limits<double>::infinity();
};

// The archetypes used by the grid scenarios.
inline resource_spec cell_resource() {
  return {"cell", resource_kind::material, resource_access::exclusive,
          resource_lifecycle::renewable, 1.0};
}
inline resource_spec food_resource(double stock) {
  return {"food", resource_kind::material, resource_access::exclusive,
          resource_lifecycle::consumable, stock};
}
inline resource_spec pheromone_resource() {
  return {"pheromone", resource_kind::information, resource_access::shared,
          resource_lifecycle::renewable, std::numeric_limits<double>::infinity()};
}
inline resource_spec nest_resource() {
  return {"nest", resource_kind::material, resource_access::shared,
          resource_lifecycle::renewable, std::numeric_limits<double>::infinity()};
}

}  // namespace swarm
