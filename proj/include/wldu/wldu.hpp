#ifndef WLDU_WLDU_HPP
#define WLDU_WLDU_HPP

#include "wldu/archive.hpp"
#include "wldu/byteio.hpp"
#include "wldu/codec.hpp"
#include "wldu/denoise.hpp"
#include "wldu/dwt53.hpp"
#include "wldu/entropy.hpp"
#include "wldu/error.hpp"
#include "wldu/experiment.hpp"
#include "wldu/frame.hpp"
#include "wldu/lifting.hpp"
#include "wldu/metrics.hpp"
#include "wldu/motion.hpp"
#include "wldu/phantom.hpp"
#include "wldu/volume.hpp"

#endif
