#include "perfsage/hostinfo.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace perfsage {

std::string host_label() {
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpuinfo, line)) {
        auto pos = line.find("model name");
        if (pos == std::string::npos) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos) break;
        std::string name = line.substr(colon + 1);
        auto begin = name.find_first_not_of(" \t");
        if (begin == std::string::npos) break;
        return name.substr(begin);
    }
    return "unknown-cpu";
}

int max_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("PERFSAGE_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

}  // namespace perfsage
