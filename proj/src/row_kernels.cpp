#include "pnforms/row_kernels.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

namespace pnforms::kernels {

namespace {

constexpr RowOps kScalar{Isa::scalar, &scalar::submul, &scalar::scale};
#if defined(__x86_64__) || defined(_M_X64)
constexpr RowOps kAvx2{Isa::avx2, &avx2::submul, &avx2::scale};
#endif

const RowOps* best_available() {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa_supported(Isa::avx2)) return &kAvx2;
#endif
  return &kScalar;
}

std::atomic<const RowOps*>& active() {
  static std::atomic<const RowOps*> ops{best_available()};
  return ops;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const RowOps& row_ops(Isa isa) {
  if (!isa_supported(isa)) throw std::runtime_error("ISA not supported: " + std::string(isa_name(isa)));
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::avx2) return kAvx2;
#endif
  return kScalar;
}

const RowOps& row_ops() { return *active().load(std::memory_order_relaxed); }

void force_isa(std::optional<Isa> isa) {
  active().store(isa ? &row_ops(*isa) : best_available(), std::memory_order_relaxed);
}

}  // namespace pnforms::kernels
