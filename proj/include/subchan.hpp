#pragma once

#include "subchan/channel.hpp"
#include "subchan/channel_io.hpp"
#include "subchan/encoder.hpp"
#include "subchan/errors.hpp"
#include "subchan/fidelity.hpp"
#include "subchan/fock.hpp"
#include "subchan/linalg.hpp"
#include "subchan/nelder_mead.hpp"
#include "subchan/quadrature.hpp"
#include "subchan/random.hpp"
#include "subchan/subchannel.hpp"
#include "subchan/sweep.hpp"
#include "subchan/tolerances.hpp"
#include "subchan/zoo.hpp"
