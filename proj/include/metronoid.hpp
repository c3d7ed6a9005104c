#pragma once

// Everything: geometry, measures, the metronoid engine, constructions,
// certificates, I/O and the command layer.

#include "metronoid/core.hpp"
#include "metronoid/rng.hpp"
#include "metronoid/parallel.hpp"
#include "metronoid/lp.hpp"
#include "metronoid/net.hpp"
#include "metronoid/body.hpp"
#include "metronoid/polygon.hpp"
#include "metronoid/measure.hpp"
#include "metronoid/metronoid.hpp"
#include "metronoid/constructions.hpp"
#include "metronoid/vertex_index.hpp"
#include "metronoid/io.hpp"
#include "metronoid/verify.hpp"
#include "metronoid/commands.hpp"
