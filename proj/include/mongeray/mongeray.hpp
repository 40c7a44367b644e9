#pragma once

#include "mongeray/errors.hpp"
#include "mongeray/quadrature.hpp"
#include "mongeray/roots.hpp"
#include "mongeray/regression.hpp"
#include "mongeray/geometry.hpp"
#include "mongeray/numerics.hpp"
#include "mongeray/densities.hpp"
#include "mongeray/potential.hpp"
#include "mongeray/transport.hpp"
#include "mongeray/pushforward.hpp"
#include "mongeray/probe.hpp"
#include "mongeray/presets.hpp"
#include "mongeray/verify.hpp"
#include "mongeray/svg.hpp"
#include "mongeray/io.hpp"
