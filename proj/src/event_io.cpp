#include "kaon/event_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "kaon/config.hpp"

namespace kaon {

namespace {

constexpr std::string_view kMagic = "# kaon-eraser events v1";
constexpr std::string_view kMetaPrefix = "# meta ";
constexpr std::string_view kHeader =
    "pair_id,left_procedure,left_observable,left_outcome,left_time,left_channel,"
    "right_procedure,right_observable,right_outcome,right_time,right_channel";
constexpr std::string_view kDiscarded = "Discarded";

void write_side(std::ostream& os, const std::optional<MeasurementRecord>& r) {
  if (!r) {
    os << kDiscarded << ",,,,";
    return;
  }
  os << to_string(r->procedure) << ',' << to_string(r->observable) << ','
     << to_string(r->outcome) << ',' << format_double(r->time) << ',';
  if (r->channel) os << to_string(*r->channel);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_double(std::string_view s) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidArgument("bad number '" + std::string(s) + "'");
  }
  return x;
}

std::optional<MeasurementRecord> parse_side(const std::vector<std::string_view>& f, std::size_t at) {
  if (f[at] == kDiscarded) {
    for (std::size_t i = at + 1; i < at + 5; ++i) {
      if (!f[i].empty()) throw InvalidArgument("discarded side must have empty fields");
    }
    return std::nullopt;
  }
  MeasurementRecord r;
  r.procedure = parse_procedure(f[at]);
  r.observable = parse_observable(f[at + 1]);
  r.outcome = parse_outcome(f[at + 2]);
  if (observable_of(r.outcome) != r.observable) {
    throw InvalidArgument("outcome does not belong to the observable");
  }
  r.time = parse_double(f[at + 3]);
  if (!(r.time >= 0.0)) throw InvalidArgument("time must be non-negative");
  if (r.procedure == Procedure::Passive) {
    r.channel = parse_channel(f[at + 4]);
    if (tagged_outcome(*r.channel) != r.outcome) {
      throw InvalidArgument("channel does not tag the outcome");
    }
  } else if (!f[at + 4].empty()) {
    throw InvalidArgument("active records carry no channel");
  }
  return r;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_events(std::ostream& os, const EventSet& set, const std::string& extra_meta_json) {
  nlohmann::json meta = nlohmann::json::parse(extra_meta_json);
  meta["experiment"] = to_json(set.config);
  meta["rng_scheme"] = set.rng_scheme;
  os << kMagic << '\n' << kMetaPrefix << meta.dump() << '\n' << kHeader << '\n';
  for (const EventRecord& ev : set.events) {
    os << ev.pair_id << ',';
    write_side(os, ev.left);
    os << ',';
    write_side(os, ev.right);
    os << '\n';
  }
}

EventSet read_events(std::istream& is) {
  EventSet set;
  bool have_header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      if (line.rfind(kMetaPrefix, 0) == 0) {
        const auto meta = nlohmann::json::parse(line.substr(kMetaPrefix.size()));
        if (meta.contains("experiment")) {
          set.config = simulation_config_from_json(meta.at("experiment"));
        }
        if (meta.contains("rng_scheme")) set.rng_scheme = meta.at("rng_scheme").get<std::string>();
        continue;
      }
      if (line.front() == '#') continue;
      if (!have_header) {
        if (line != kHeader) throw InvalidArgument("expected the column header");
        have_header = true;
        continue;
      }
      const auto f = split(line);
      if (f.size() != 11) throw InvalidArgument("expected 11 fields, found " + std::to_string(f.size()));
      EventRecord ev;
      std::uint64_t id = 0;
      const auto [ptr, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), id);
      if (ec != std::errc() || ptr != f[0].data() + f[0].size()) {
        throw InvalidArgument("bad pair_id '" + std::string(f[0]) + "'");
      }
      ev.pair_id = id;
      ev.left = parse_side(f, 1);
      ev.right = parse_side(f, 6);
      set.events.push_back(std::move(ev));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("events line " + std::to_string(line_no) + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("events line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (set.events.empty()) throw InvalidArgument("events: no records found");
  return set;
}

}  // namespace kaon
