#ifndef PARISIAN_GRIDIO_HPP
#define PARISIAN_GRIDIO_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace parisian::gridio {

/// Versioned text container for labeled axes and data blocks. Values are written with 17
/// significant digits so doubles round-trip bit-exactly. Layout:
///
///   parisian-grid v1
///   name <token>
///   meta <key> <string>          (repeatable)
///   metnum <key> <value>         (repeatable)
///   axis <key> <count> <values...>
///   data <key> <count> <values...>
///   end
struct GridFile {
    std::string name;
    std::map<std::string, std::string> meta;
    std::map<std::string, double> meta_num;
    std::map<std::string, std::vector<double>> axes;
    std::map<std::string, std::vector<double>> data;

    void save(std::ostream& os) const;
    static GridFile load(std::istream& is);
};

}  // namespace parisian::gridio

#endif
