#pragma once

#include "forage/kernels.hpp"

namespace forage::kernels::detail {

const KernelTable& scalar_table();
#if defined(FORAGE_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace forage::kernels::detail
