#include "cli/csv.hpp"

#include <sstream>

#include "cli/report.hpp"

namespace swstab::cli {

namespace {

std::string_view event_tag(const SwitchEvent& e) {
  if (e.line) return *e.line == ZLine::Plus ? "switch+" : "switch-";
  return e.to == Field::A ? "switch+" : "switch-";
}

}  // namespace

void write_csv(const Trajectory& tr, std::ostream& out) {
  out << "t,x1,x2,norm,active,event\n";
  const std::string u_label = tr.constant_u ? "u=" + format_double(*tr.constant_u) : std::string();
  std::size_t next_event = 0;
  for (const auto& s : tr.samples) {
    std::string_view event;
    if (next_event < tr.switch_events.size() && tr.switch_events[next_event].t == s.t) {
      event = event_tag(tr.switch_events[next_event]);
      ++next_event;
    }
    out << format_double(s.t) << ',' << format_double(s.state.x1()) << ',' << format_double(s.state.x2()) << ','
        << format_double(s.state.norm()) << ',' << (tr.constant_u ? u_label : std::string(to_string(s.active)))
        << ',' << event << '\n';
  }
}

std::string to_csv(const Trajectory& tr) {
  std::ostringstream os;
  write_csv(tr, os);
  return os.str();
}

}  // namespace swstab::cli
