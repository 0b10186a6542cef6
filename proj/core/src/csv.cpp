#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "perfsage/datagen.hpp"
#include "perfsage/errors.hpp"
#include "perfsage/features.hpp"

namespace perfsage::datagen {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& s, const std::string& path, std::size_t lineno) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE)
        throw LoadError(path + ":" + std::to_string(lineno) + ": bad numeric field '" +
                        s + "'");
    return v;
}

}  // namespace

void save_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // LF line endings everywhere
    if (!os) throw LoadError("cannot open '" + path + "' for writing");
    os << "kernel,variant";
    for (const auto& name : dataset.feature_names) os << ',' << name;
    os << ",c,runtime_s\n";
    const std::string kind = kernels::to_string(dataset.kind);
    for (const auto& s : dataset.samples) {
        os << kind << ',' << s.variant_id;
        for (double f : s.features) os << ',' << format_double(f);
        os << ',' << s.c << ',' << format_double(s.runtime_s) << '\n';
    }
    if (!os) throw LoadError("write to '" + path + "' failed");
}

Dataset load_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw LoadError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(is, line)) throw LoadError(path + ": missing header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    auto header = split_fields(line);
    if (header.size() < 4 || header[0] != "kernel" || header[1] != "variant" ||
        header[header.size() - 2] != "c" || header.back() != "runtime_s")
        throw LoadError(path + ":1: header must be kernel,variant,<features...>,c,runtime_s");

    Dataset ds;
    ds.feature_names.assign(header.begin() + 2, header.end() - 2);
    ds.kind = models::kind_from_feature_names(ds.feature_names).first;

    const std::size_t expected = header.size();
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != expected)
            throw LoadError(path + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(expected) + " fields, got " +
                            std::to_string(fields.size()));
        if (fields[0] != kernels::to_string(ds.kind))
            throw LoadError(path + ":" + std::to_string(lineno) +
                            ": kernel column does not match the schema kernel");
        Sample s;
        s.variant_id = fields[1];
        s.features.reserve(ds.feature_names.size());
        for (std::size_t i = 2; i < expected - 2; ++i)
            s.features.push_back(parse_double(fields[i], path, lineno));
        const double c = parse_double(fields[expected - 2], path, lineno);
        if (c < 0.0) throw LoadError(path + ":" + std::to_string(lineno) + ": negative c");
        s.c = static_cast<std::uint64_t>(c);
        s.runtime_s = parse_double(fields[expected - 1], path, lineno);
        if (!(s.runtime_s > 0.0))
            throw LoadError(path + ":" + std::to_string(lineno) + ": runtime_s must be > 0");
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

}  // namespace perfsage::datagen
