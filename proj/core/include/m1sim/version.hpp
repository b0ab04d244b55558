#pragma once

#define M1SIM_VERSION "1.0.0"

namespace m1sim {
inline const char* version() { return M1SIM_VERSION; }
}
