#pragma once

#include <cstdint>
#include <vector>

#include "msim/domain.hpp"

namespace msim {

/// Cells of one PLMN laid out on a ring.
///
/// Cell c belongs to tracking area c / cells_per_ta; tracking areas are
/// grouped into registration areas (RAAs) of tas_per_raa consecutive TAs.
/// A TA list is the camped TA plus `ta_list_radius` neighbours on each side,
/// and the RAN notification area of an INACTIVE UE is the suspending TA plus
/// `rna_ta_radius` neighbours.
struct TopologyModel {
  std::uint32_t num_cells = 64;
  std::uint32_t cells_per_ta = 4;
  std::uint32_t tas_per_raa = 4;
  std::uint32_t ta_list_radius = 1;
  std::uint32_t rna_ta_radius = 0;

  std::uint32_t num_tas() const { return (num_cells + cells_per_ta - 1) / cells_per_ta; }
  std::uint32_t num_raas() const { return (num_tas() + tas_per_raa - 1) / tas_per_raa; }

  TaId ta_of(CellId cell) const { return cell / cells_per_ta; }
  std::uint32_t raa_of(TaId ta) const { return ta / tas_per_raa; }
  std::uint32_t cells_in_ta(TaId ta) const;

  // TAs within `radius` of `center` on the ring, sorted, without duplicates.
  std::vector<TaId> ta_ring(TaId center, std::uint32_t radius) const;
  std::vector<TaId> ta_list_around(TaId ta) const { return ta_ring(ta, ta_list_radius); }
  std::vector<TaId> rna_around(TaId ta) const { return ta_ring(ta, rna_ta_radius); }

  std::uint64_t cells_in(const std::vector<TaId>& tas) const;

  // Cells covered by the registration area that holds `ta_list`: every cell
  // in 4G (the whole pool), the union of the touched RAAs in 5G.
  std::uint64_t registration_area_cells(const std::vector<TaId>& ta_list, Generation g) const;
  bool in_registration_area(CellId cell, const std::vector<TaId>& ta_list, Generation g) const;

  void validate() const;
};

bool contains(const std::vector<TaId>& tas, TaId ta);

}  // namespace msim
