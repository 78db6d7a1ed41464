#pragma once

// Umbrella header.

#include "amseq/errors.hpp"
#include "amseq/numerics.hpp"
#include "amseq/stepseq.hpp"
#include "amseq/seqcore.hpp"
#include "amseq/regularity.hpp"
#include "amseq/counterexamples.hpp"
#include "amseq/verify.hpp"
#include "amseq/io.hpp"
