#include "msim/topology.hpp"

#include <algorithm>
#include <set>

namespace msim {

std::uint32_t TopologyModel::cells_in_ta(TaId ta) const {
  const std::uint32_t first = ta * cells_per_ta;
  if (first >= num_cells) return 0;
  return std::min(cells_per_ta, num_cells - first);
}

std::vector<TaId> TopologyModel::ta_ring(TaId center, std::uint32_t radius) const {
  const std::uint32_t n = num_tas();
  std::set<TaId> out;
  for (std::int64_t d = -static_cast<std::int64_t>(radius); d <= static_cast<std::int64_t>(radius); ++d) {
    const std::int64_t ta = ((static_cast<std::int64_t>(center) + d) % n + n) % n;
    out.insert(static_cast<TaId>(ta));
  }
  return {out.begin(), out.end()};
}

std::uint64_t TopologyModel::cells_in(const std::vector<TaId>& tas) const {
  std::uint64_t total = 0;
  for (TaId ta : tas) total += cells_in_ta(ta);
  return total;
}

std::uint64_t TopologyModel::registration_area_cells(const std::vector<TaId>& ta_list,
                                                     Generation g) const {
  if (g == Generation::k4G) return num_cells;
  std::set<std::uint32_t> raas;
  for (TaId ta : ta_list) raas.insert(raa_of(ta));
  std::uint64_t total = 0;
  for (std::uint32_t raa : raas)
    for (TaId ta = raa * tas_per_raa; ta < std::min(num_tas(), (raa + 1) * tas_per_raa); ++ta)
      total += cells_in_ta(ta);
  return total;
}

bool TopologyModel::in_registration_area(CellId cell, const std::vector<TaId>& ta_list,
                                         Generation g) const {
  if (g == Generation::k4G) return cell < num_cells;
  const std::uint32_t raa = raa_of(ta_of(cell));
  return std::any_of(ta_list.begin(), ta_list.end(), [&](TaId ta) { return raa_of(ta) == raa; });
}

void TopologyModel::validate() const {
  if (num_cells == 0 || cells_per_ta == 0 || tas_per_raa == 0)
    throw Error(ErrorCode::kConfigInvalid, "topology sizes must be positive");
}

bool contains(const std::vector<TaId>& tas, TaId ta) {
  return std::binary_search(tas.begin(), tas.end(), ta);
}

}  // namespace msim
