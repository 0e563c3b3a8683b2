#ifndef CHUR_CHUR_HPP
#define CHUR_CHUR_HPP

#include "charfunc.hpp"
#include "chur_core.hpp"
#include "errors.hpp"
#include "fft.hpp"
#include "grid.hpp"
#include "io.hpp"
#include "mask.hpp"
#include "nelder_mead.hpp"
#include "parallel.hpp"
#include "protocols.hpp"
#include "states.hpp"
#include "sweep.hpp"
#include "tightness.hpp"

namespace chur {
inline constexpr const char *version_string = "chur 0.1.0";
}

#endif // CHUR_CHUR_HPP
