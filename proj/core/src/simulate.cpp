#include "pdeconv/simulate.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

namespace pdeconv {

PointPattern merge(const std::vector<PointPattern>& patterns) {
    PointPattern out;
    std::size_t total = 0;
    for (const auto& p : patterns) total += p.points.size();
    out.points.reserve(total);
    for (const auto& p : patterns)
        out.points.insert(out.points.end(), p.points.begin(), p.points.end());
    out.sort();
    return out;
}

Dataset simulate_dataset(const FunctionSpec& intensity, const FunctionSpec& error, long n,
                         long m, std::uint64_t seed, std::uint64_t replicate) {
    if (n < 1 || m < 1) throw std::invalid_argument("dataset needs n >= 1 and m >= 1");
    Dataset ds;
    ds.seed = seed;
    ds.intensity_id = intensity.describe();
    ds.error_id = error.describe();
    Rng proc_rng = Rng::substream(seed, replicate, stream_role::processes);
    ds.processes.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        PointPattern hidden = sample_ppp(intensity, proc_rng);
        ds.processes.push_back(contaminate(hidden, error, proc_rng));
    }
    Rng err_rng = Rng::substream(seed, replicate, stream_role::errors);
    ds.error_sample = sample_errors(error, m, err_rng);
    return ds;
}

void write_dataset_csv(std::ostream& os, const Dataset& ds) {
    os << "kind,index,value\n";
    char buf[64];
    for (std::size_t i = 0; i < ds.processes.size(); ++i)
        for (double x : ds.processes[i].points) {
            std::snprintf(buf, sizeof buf, "point,%zu,%.17g\n", i, x);
            os << buf;
        }
    for (std::size_t i = 0; i < ds.error_sample.size(); ++i) {
        std::snprintf(buf, sizeof buf, "error,%zu,%.17g\n", i, ds.error_sample[i]);
        os << buf;
    }
}

Dataset read_dataset_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("kind,index,value", 0) != 0)
        throw std::runtime_error("dataset CSV must start with header kind,index,value");
    Dataset ds;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        char kind[16];
        std::size_t index = 0;
        double value = 0.0;
        if (std::sscanf(line.c_str(), "%15[^,],%zu,%lf", kind, &index, &value) != 3)
            throw std::runtime_error("bad dataset CSV row: " + line);
        const std::string k(kind);
        if (k == "point") {
            if (ds.processes.size() <= index) ds.processes.resize(index + 1);
            ds.processes[index].points.push_back(value);
        } else if (k == "error") {
            if (ds.error_sample.size() <= index) ds.error_sample.resize(index + 1);
            ds.error_sample[index] = value;
        } else {
            throw std::runtime_error("unknown dataset row kind: " + k);
        }
    }
    for (auto& p : ds.processes) p.sort();
    if (ds.processes.empty() || ds.error_sample.empty())
        throw std::runtime_error("dataset CSV must contain process and error rows");
    return ds;
}

} // namespace pdeconv
