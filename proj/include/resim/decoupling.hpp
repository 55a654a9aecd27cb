#ifndef RESIM_DECOUPLING_HPP
#define RESIM_DECOUPLING_HPP

#include "resim/block_matrix.hpp"

namespace resim {

enum class Decoupling { none, quasi_impes, abf };

/// Left block-diagonal transformations of (A, b) held in `a` (matrix + rhs).
/// Each cell's block row and rhs block are multiplied by an m x m matrix L_c
/// built from the cell's diagonal block D; well rows are left unchanged, so
/// the solution is preserved exactly.
///
/// Quasi-IMPES: L_c = [1, -D_ps D_ss^-1; 0, I], which zeroes the saturation
/// columns of the pressure row in D. A singular D_ss falls back to L_c = I.
BlockMatrix quasi_impes_decouple(BlockMatrix a, Index* fallbacks = nullptr,
                                 const Partition* part = nullptr);

/// ABF: L_c = D^-1, making every diagonal block the identity. A singular D
/// falls back to row scaling by the inverse diagonal entries.
BlockMatrix abf_decouple(BlockMatrix a, Index* fallbacks = nullptr, const Partition* part = nullptr);

BlockMatrix decouple(BlockMatrix a, Decoupling kind, Index* fallbacks = nullptr,
                     const Partition* part = nullptr);

}  // namespace resim

#endif  // RESIM_DECOUPLING_HPP
