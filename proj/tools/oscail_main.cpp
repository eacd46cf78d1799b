// The OSCAIL experimenter front end. Run without arguments for the option
// usage screen; prompts read from standard input, or from a file given with
// --answers <path> for scripted sessions.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "oscail/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args;
    std::unique_ptr<std::ifstream> answers;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--answers" && i + 1 < argc) {
            answers = std::make_unique<std::ifstream>(argv[++i]);
            if (!*answers) {
                std::cerr << "cannot open answers file: " << argv[i] << '\n';
                return 1;
            }
            continue;
        }
        args.push_back(a);
    }
    std::istream& in = answers ? static_cast<std::istream&>(*answers) : std::cin;
    return oscail::run_cli(args, in, std::cout);
}
