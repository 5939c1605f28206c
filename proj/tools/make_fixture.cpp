// Writes the synthetic composite fixture (attributes, catalog, employment, titles, config).

#include "taskrisk/synthetic.hpp"

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: make_fixture <dir> [seed]\n       make_fixture --large <dir> [seed]\n";
        return 2;
    }
    if (std::string(argv[1]) == "--large") {
        if (argc < 3) return 2;
        const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 7;
        std::cout << "large config " << taskrisk::synthetic::write_large_fixture(argv[2], seed).string() << '\n';
        return 0;
    }
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20240601;
    const auto fx = taskrisk::synthetic::write_composite_fixture(argv[1], seed);
    std::cout << "fixture: " << fx.occupations << " occupations, " << fx.planted_vulnerable.size()
              << " planted vulnerable, config " << fx.config.string() << '\n';
    return 0;
}
