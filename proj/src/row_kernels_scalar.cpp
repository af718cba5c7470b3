#include "pnforms/row_kernels.hpp"

namespace pnforms::kernels::scalar {

void submul(std::uint32_t* dst, const std::uint32_t* src, std::size_t n, std::uint32_t f, std::uint32_t q) {
  for (std::size_t j = 0; j < n; ++j) {
    const auto prod = static_cast<std::uint32_t>(static_cast<std::uint64_t>(f) * src[j] % q);
    dst[j] = dst[j] >= prod ? dst[j] - prod : dst[j] + q - prod;
  }
}

void scale(std::uint32_t* v, std::size_t n, std::uint32_t f, std::uint32_t q) {
  for (std::size_t j = 0; j < n; ++j) {
    v[j] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(f) * v[j] % q);
  }
}

}  // namespace pnforms::kernels::scalar
