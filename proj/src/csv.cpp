#include "vrlab/csv.hpp"

#include <iomanip>
#include <sstream>

#include "vrlab/errors.hpp"

namespace vrlab::csv {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string format(double v) {
  std::ostringstream o;
  o << std::setprecision(17) << v;
  return o.str();
}

}  // namespace vrlab::csv
