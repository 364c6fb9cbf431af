#pragma once

// Everything: linear algebra, the SDP solver, divergences, smoothers and the
// verification harness.

#include "oneshot/errors.hpp"
#include "oneshot/linalg.hpp"
#include "oneshot/sdp.hpp"
#include "oneshot/sdp_ball.hpp"
#include "oneshot/matrix_json.hpp"
#include "oneshot/divergences.hpp"
#include "oneshot/smoothing.hpp"
#include "oneshot/random.hpp"
#include "oneshot/instances.hpp"
#include "oneshot/channels.hpp"
#include "oneshot/verify.hpp"
#include "oneshot/battery.hpp"
#include "oneshot/log.hpp"
