#pragma once

#include <string>
#include <vector>

namespace ostra {

struct CnfFile {
    int vars = 0;
    std::vector<std::string> comments;           // emitted as "c <line>"
    std::vector<std::vector<int>> clauses;
};

std::string write_dimacs(const CnfFile& cnf);
CnfFile read_dimacs(const std::string& text);

}  // namespace ostra
