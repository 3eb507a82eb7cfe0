#include "parisian/gridio.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace parisian::gridio {

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_block(std::ostream& os, const char* tag, const std::string& key,
                 const std::vector<double>& vals) {
    os << tag << ' ' << key << ' ' << vals.size();
    for (double v : vals) os << ' ' << fmt17(v);
    os << '\n';
}

}  // namespace

void GridFile::save(std::ostream& os) const {
    os << "parisian-grid v1\n";
    os << "name " << name << '\n';
    for (const auto& [k, v] : meta) os << "meta " << k << ' ' << v << '\n';
    for (const auto& [k, v] : meta_num) os << "metnum " << k << ' ' << fmt17(v) << '\n';
    for (const auto& [k, v] : axes) write_block(os, "axis", k, v);
    for (const auto& [k, v] : data) write_block(os, "data", k, v);
    os << "end\n";
}

GridFile GridFile::load(std::istream& is) {
    GridFile g;
    std::string header;
    std::getline(is, header);
    if (header != "parisian-grid v1")
        throw std::runtime_error("gridio: bad header '" + header + "'");
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "end") return g;
        if (tag == "name") {
            ls >> g.name;
        } else if (tag == "meta") {
            std::string k, v;
            ls >> k >> v;
            g.meta[k] = v;
        } else if (tag == "metnum") {
            std::string k;
            double v;
            ls >> k >> v;
            g.meta_num[k] = v;
        } else if (tag == "axis" || tag == "data") {
            std::string k;
            std::size_t n = 0;
            ls >> k >> n;
            std::vector<double> vals(n);
            for (std::size_t i = 0; i < n; ++i) {
                if (!(ls >> vals[i]))
                    throw std::runtime_error("gridio: truncated block '" + k + "'");
            }
            (tag == "axis" ? g.axes : g.data)[k] = std::move(vals);
        } else {
            throw std::runtime_error("gridio: unknown tag '" + tag + "'");
        }
    }
    throw std::runtime_error("gridio: missing end marker");
}

}  // namespace parisian::gridio
