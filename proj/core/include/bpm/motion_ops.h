#pragma once

#include <cstdint>

#include "bpm/motion.h"

namespace bpm {

// Moves the first frame's root to the XZ origin, turns the first frame to
// face +Z and drops the sequence so its lowest joint touches y = 0. Only the
// first frame's heading is normalized; later frames keep their relative yaw.
// Already-canonical input is returned bit-for-bit unchanged.
MotionSequence canonicalize(const MotionSequence& motion);

// True when `motion` already satisfies canonicalize()'s postconditions within
// `tolerance`.
bool is_canonical(const MotionSequence& motion, double tolerance = 1e-5);

// Resamples to `target_fps`: positions lerp, rotations shortest-arc slerp.
// Output frames that land exactly on an input frame are copies of it.
MotionSequence resample(const MotionSequence& motion, double target_fps);

// Half-open frame range [start, end).
MotionSequence crop_frames(const MotionSequence& motion, int start, int end);

// Random window of at most `max_seconds`; shorter motions are returned as-is.
MotionSequence random_crop_to_duration(const MotionSequence& motion, double max_seconds,
                                       uint64_t seed);

}  // namespace bpm
