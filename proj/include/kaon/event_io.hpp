#pragma once

#include <iosfwd>
#include <string>

#include "kaon/simulator.hpp"

namespace kaon {

/// Line-oriented event format:
///
///   # kaon-eraser events v1
///   # meta {"experiment": {...}, "rng_scheme": "...", ...}
///   pair_id,left_procedure,left_observable,left_outcome,left_time,left_channel,right_...
///   0,Active,Strangeness,K0,2,,Active,Strangeness,K0bar,2,
///
/// A kaon lost before its detector is written as `Discarded,,,,`. Times use
/// the shortest decimal form that reads back to the same double.
void write_events(std::ostream& os, const EventSet& set, const std::string& extra_meta_json = "{}");

/// Throws InvalidArgument naming the offending line on malformed input and
/// on a file without records.
EventSet read_events(std::istream& is);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace kaon
