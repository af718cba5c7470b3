#pragma once

// Inner loops of GF(q) elimination. Each operation has a scalar reference
// implementation and, where the CPU supports it, a vectorized variant. The
// variant is picked once at runtime; results are bit-identical.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace pnforms::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// dst[j] = (dst[j] - f * src[j]) mod q for j < n. Requires f, src[j], dst[j] < q.
using SubmulFn = void (*)(std::uint32_t* dst, const std::uint32_t* src, std::size_t n, std::uint32_t f,
                          std::uint32_t q);
/// v[j] = (f * v[j]) mod q.
using ScaleFn = void (*)(std::uint32_t* v, std::size_t n, std::uint32_t f, std::uint32_t q);

struct RowOps {
  Isa isa;
  SubmulFn submul;
  ScaleFn scale;
};

/// Largest modulus (exclusive) handled by the vectorized paths; above it they
/// defer to the scalar code.
inline constexpr std::uint32_t kVectorModulusLimit = 1u << 26;

bool isa_supported(Isa isa);

/// Kernels for a specific ISA; throws std::runtime_error if unsupported.
const RowOps& row_ops(Isa isa);

/// Kernels selected for this process (best supported ISA unless overridden).
const RowOps& row_ops();

/// Test hook: pin the active ISA, or restore auto-selection with nullopt.
void force_isa(std::optional<Isa> isa);

namespace scalar {
void submul(std::uint32_t* dst, const std::uint32_t* src, std::size_t n, std::uint32_t f, std::uint32_t q);
void scale(std::uint32_t* v, std::size_t n, std::uint32_t f, std::uint32_t q);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void submul(std::uint32_t* dst, const std::uint32_t* src, std::size_t n, std::uint32_t f, std::uint32_t q);
void scale(std::uint32_t* v, std::size_t n, std::uint32_t f, std::uint32_t q);
}  // namespace avx2
#endif

}  // namespace pnforms::kernels
