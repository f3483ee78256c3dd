#include "ostra/dimacs.hpp"

#include <sstream>
#include <stdexcept>

namespace ostra {

std::string write_dimacs(const CnfFile& cnf) {
    std::ostringstream out;
    for (const auto& c : cnf.comments) out << "c " << c << "\n";
    out << "p cnf " << cnf.vars << " " << cnf.clauses.size() << "\n";
    for (const auto& clause : cnf.clauses) {
        for (int lit : clause) out << lit << " ";
        out << "0\n";
    }
    return out.str();
}

CnfFile read_dimacs(const std::string& text) {
    CnfFile cnf;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    size_t expected = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == 'c') {
            cnf.comments.push_back(line.size() > 2 ? line.substr(2) : "");
            continue;
        }
        if (line[0] == 'p') {
            std::istringstream hs(line);
            std::string p, fmt;
            hs >> p >> fmt >> cnf.vars >> expected;
            if (fmt != "cnf") throw std::invalid_argument("dimacs: not a cnf file");
            have_header = true;
            continue;
        }
        std::istringstream cs(line);
        std::vector<int> clause;
        int lit;
        while (cs >> lit) {
            if (lit == 0) break;
            clause.push_back(lit);
        }
        cnf.clauses.push_back(std::move(clause));
    }
    if (!have_header) throw std::invalid_argument("dimacs: missing header");
    if (cnf.clauses.size() != expected)
        throw std::invalid_argument("dimacs: clause count mismatch");
    return cnf;
}

}  // namespace ostra
