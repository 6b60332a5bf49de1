#pragma once
// rules.hpp -- canonical rule names and coverage accounting.

#include <set>
#include <string>
#include <vector>

namespace ildtt {

// Every rule of the theory, by the name used in diagnostics and traces.
inline const std::vector<std::string>& all_rules() {
    static const std::vector<std::string> rules = {
        // context formation
        "C-Emp", "Int-C-Ext", "Lin-C-Ext",
        // type formation
        "Base-F", "I-F", "(x)-F", "-o-F", "Top-F", "&-F", "0-F", "(+)-F",
        "!-F", "Sg-F", "Pi-F", "Id-F", "2-F",
        // typing
        "Int-Var", "Lin-Var", "Const",
        "I-I", "I-E", "(x)-I", "(x)-E", "-o-I", "-o-E", "Top-I",
        "&-I", "&-E1", "&-E2", "0-E", "(+)-I1", "(+)-I2", "(+)-E",
        "!-I", "!-E", "Sg-I", "Sg-E", "Pi-I", "Pi-E",
        "Id-I", "Id-E", "2-I1", "2-I2", "2-E",
        "Tm-Conv", "Ty-Conv",
        // structural
        "Int-Weak", "Int-Exch", "Lin-Exch",
        "Int-Ty-Subst", "Int-Tm-Subst", "Lin-Tm-Subst",
        // definitional equality: general
        "Eq-R", "Eq-S", "Eq-T",
        // computation
        "I-C", "(x)-C", "-o-C", "&-C1", "&-C2", "(+)-C1", "(+)-C2",
        "!-C", "Sg-C", "Pi-C", "2-C1", "2-C2", "Id-C",
        // uniqueness
        "I-U", "(x)-U", "-o-U", "Top-U", "&-U", "0-U", "(+)-U",
        "!-U", "Sg-U", "Pi-U", "2-U", "Id-U",
        // commuting conversions
        "Comm-Let", "Comm-Case", "Comm-Abort", "Comm-If",
    };
    return rules;
}

struct Coverage {
    std::set<std::string> hit;
    void mark(const std::string& rule) { hit.insert(rule); }
    bool covered(const std::string& rule) const { return hit.count(rule) > 0; }
    std::vector<std::string> missing() const {
        std::vector<std::string> out;
        for (auto& r : all_rules())
            if (!hit.count(r)) out.push_back(r);
        return out;
    }
};

}  // namespace ildtt
