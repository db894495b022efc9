#include "coxinv/groups.hpp"

#include <cctype>
#include <sstream>

namespace coxinv {

namespace {

Factor parse_factor(const std::string& tok) {
    if (tok.size() >= 4 && (tok.rfind("I2(", 0) == 0) && tok.back() == ')') {
        int m = 0;
        try {
            m = std::stoi(tok.substr(3, tok.size() - 4));
        } catch (const std::exception&) {
            throw UnsupportedType("cannot parse dihedral factor: " + tok);
        }
        return Factor{FactorType::I2, m};
    }
    if (tok.empty()) throw UnsupportedType("empty group factor");
    char c = tok[0];
    int rank = 0;
    try {
        rank = std::stoi(tok.substr(1));
    } catch (const std::exception&) {
        throw UnsupportedType("cannot parse group factor: " + tok);
    }
    switch (c) {
        case 'A': return Factor{FactorType::A, rank};
        case 'B': return Factor{FactorType::B, rank};
        case 'D': return Factor{FactorType::D, rank};
        case 'I': return Factor{FactorType::I2, rank};  // shorthand "I5" == "I2(5)"
        default: throw UnsupportedType(std::string("unsupported group type: ") + c);
    }
}

}  // namespace

GroupSpec GroupSpec::parse_label(const std::string& label) {
    GroupSpec spec;
    std::string tok;
    std::istringstream in(label);
    while (std::getline(in, tok, 'x')) {
        if (tok.empty()) continue;
        if (tok[0] == 'R') {
            try {
                spec.fixed_dim += std::stoi(tok.substr(1));
            } catch (const std::exception&) {
                throw UnsupportedType("cannot parse fixed block: " + tok);
            }
        } else {
            spec.factors.push_back(parse_factor(tok));
        }
    }
    spec.validate();
    return spec;
}

std::string GroupSpec::label() const {
    std::ostringstream os;
    bool first = true;
    if (fixed_dim > 0) {
        os << "R" << fixed_dim;
        first = false;
    }
    for (const auto& f : factors) {
        if (!first) os << "x";
        first = false;
        if (f.type == FactorType::I2)
            os << "I2(" << f.rank << ")";
        else
            os << factor_type_name(f.type) << f.rank;
    }
    return os.str();
}

}  // namespace coxinv
