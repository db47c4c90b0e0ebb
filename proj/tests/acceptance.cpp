// Runs the numbered acceptance criteria and prints one line per criterion.
// usage: acceptance [quick|full] [id ...]

#include <cstdlib>
#include <cstring>
#include <iostream>

#include "frobkit/acceptance.hpp"

int main(int argc, char** argv)
{
    auto profile = acceptance::Profile::Full;
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "quick")) profile = acceptance::Profile::Quick;
        else if (!std::strcmp(argv[i], "full")) profile = acceptance::Profile::Full;
        else only.push_back(std::atoi(argv[i]));
    }
    int failed = 0;
    acceptance::run(profile, only, [&](const acceptance::Result& r) {
        std::cout << r.line() << std::endl;
        if (!r.pass()) ++failed;
    });
    std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criterion(s) failed" : std::string("acceptance: all criteria pass"))
              << std::endl;
    return failed ? 1 : 0;
}
