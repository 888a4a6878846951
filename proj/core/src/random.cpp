#include "safegp/random.hpp"

namespace safegp {

static_assert(derive_seed(1, "a") != derive_seed(1, "b"));
static_assert(derive_seed(1, "a", 0, 1) != derive_seed(1, "a", 1, 0));

}  // namespace safegp
