#pragma once
// printer.hpp -- renders core terms and types back into surface syntax.
//
// Binder scopes are opened with display names derived from the stored hints,
// freshened against everything already in scope, so output is always
// re-parseable (up to the Sigma-intro / Pi-app overloading, which prints in
// the shared surface notation `!a (x) b` / `f !a`).

#include <set>
#include <sstream>
#include <string>

#include "syntax.hpp"

namespace ildtt {

class Printer {
public:
    explicit Printer(std::set<std::string> in_scope = {}) : used_(std::move(in_scope)) {}

    std::string ty(const TyP& t) { return ty_prec(t, 0); }
    std::string tm(const TmP& t) { return tm_prec(t, 0); }

    std::string fresh(const std::string& hint) {
        std::string base = hint.empty() ? std::string("v") : hint;
        if (!used_.count(base)) {
            used_.insert(base);
            return base;
        }
        for (int i = 1;; ++i) {
            std::string cand = base + std::to_string(i);
            if (!used_.count(cand)) {
                used_.insert(cand);
                return cand;
            }
        }
    }

private:
    std::set<std::string> used_;

    static std::string wrap(bool cond, const std::string& s) {
        return cond ? "(" + s + ")" : s;
    }

    // Type precedence levels: 0 lolli, 1 plus/with, 2 tensor, 3 bang, 4 atom.
    std::string ty_prec(const TyP& t, int prec) {
        if (!t) return "<null>";
        return std::visit(overloaded{
            [&](const TyBase& n) -> std::string {
                if (n.args.empty()) return n.name;
                std::string s = n.name + "[";
                for (size_t i = 0; i < n.args.size(); ++i) {
                    if (i) s += ", ";
                    s += tm_prec(n.args[i], 0);
                }
                return s + "]";
            },
            [&](const TyUnit&) -> std::string { return "I"; },
            [&](const TyTensor& n) -> std::string {
                return wrap(prec > 2, ty_prec(n.a, 3) + " (x) " + ty_prec(n.b, 2));
            },
            [&](const TyLolli& n) -> std::string {
                return wrap(prec > 0, ty_prec(n.a, 1) + " -o " + ty_prec(n.b, 0));
            },
            [&](const TyTop&) -> std::string { return "Top"; },
            [&](const TyWith& n) -> std::string {
                return wrap(prec > 1, ty_prec(n.a, 2) + " & " + ty_prec(n.b, 1));
            },
            [&](const TyZero&) -> std::string { return "0"; },
            [&](const TyPlus& n) -> std::string {
                return wrap(prec > 1, ty_prec(n.a, 2) + " (+) " + ty_prec(n.b, 1));
            },
            [&](const TyBang& n) -> std::string { return "!" + ty_prec(n.a, 4); },
            [&](const TySigma& n) -> std::string {
                std::string x = fresh(n.hint.empty() ? "x" : n.hint);
                std::string body = ty_prec(open_ty1(n.body, fvar(Sort::Int, x)), 0);
                release(x);
                return wrap(prec > 0, "Sg !" + x + ":" + ty_prec(n.dom, 1) + ". " + body);
            },
            [&](const TyPi& n) -> std::string {
                std::string x = fresh(n.hint.empty() ? "x" : n.hint);
                std::string body = ty_prec(open_ty1(n.body, fvar(Sort::Int, x)), 0);
                release(x);
                return wrap(prec > 0, "Pi !" + x + ":" + ty_prec(n.dom, 1) + ". " + body);
            },
            [&](const TyId& n) -> std::string {
                return wrap(prec > 3, "Id " + ty_prec(n.a, 4) + " (" + tm_prec(n.lhs, 0) + ", " +
                                          tm_prec(n.rhs, 0) + ")");
            },
            [&](const TyTwo&) -> std::string { return "2"; },
        }, t->node);
    }

    // Term precedence levels: 0 binder-like, 1 tensor pair, 2 application, 3 atom.
    std::string tm_prec(const TmP& t, int prec) {
        if (!t) return "<null>";
        return std::visit(overloaded{
            [&](const TmBVar& v) -> std::string {
                return "?b" + std::to_string(v.depth) + "." + std::to_string(v.slot);
            },
            [&](const TmFVar& v) -> std::string { return v.name; },
            [&](const TmConst& n) -> std::string {
                if (n.args.empty()) return n.name;
                std::string s = n.name + "[";
                for (size_t i = 0; i < n.args.size(); ++i) {
                    if (i) s += ", ";
                    s += tm_prec(n.args[i], 0);
                }
                return s + "]";
            },
            [&](const TmStar&) -> std::string { return "*"; },
            [&](const TmTopUnit&) -> std::string { return "<>"; },
            [&](const TmTt&) -> std::string { return "tt"; },
            [&](const TmFf&) -> std::string { return "ff"; },
            [&](const TmTensor& n) -> std::string {
                return wrap(prec > 1, tm_prec(n.a, 2) + " (x) " + tm_prec(n.b, 1));
            },
            [&](const TmSigmaPair& n) -> std::string {
                return wrap(prec > 1, "!" + tm_prec(n.a, 3) + " (x) " + tm_prec(n.b, 1));
            },
            [&](const TmBang& n) -> std::string { return "!" + tm_prec(n.a, 3); },
            [&](const TmLam& n) -> std::string {
                std::string x = fresh(n.hint.empty() ? "x" : n.hint);
                std::string body = tm_prec(open_tm1(n.body, fvar(Sort::Lin, x)), 0);
                release(x);
                return wrap(prec > 0, "\\" + x + ":" + ty_prec(n.dom, 1) + ". " + body);
            },
            [&](const TmPiLam& n) -> std::string {
                std::string x = fresh(n.hint.empty() ? "x" : n.hint);
                std::string body = tm_prec(open_tm1(n.body, fvar(Sort::Int, x)), 0);
                release(x);
                return wrap(prec > 0, "\\!" + x + ":" + ty_prec(n.dom, 1) + ". " + body);
            },
            [&](const TmApp& n) -> std::string {
                return wrap(prec > 2, tm_prec(n.f, 2) + " " + tm_prec(n.a, 3));
            },
            [&](const TmPiApp& n) -> std::string {
                return wrap(prec > 2, tm_prec(n.f, 2) + " !" + tm_prec(n.a, 3));
            },
            [&](const TmPair& n) -> std::string {
                return "<" + tm_prec(n.a, 0) + ", " + tm_prec(n.b, 0) + ">";
            },
            [&](const TmFst& n) -> std::string { return wrap(prec > 2, "fst " + tm_prec(n.t, 3)); },
            [&](const TmSnd& n) -> std::string { return wrap(prec > 2, "snd " + tm_prec(n.t, 3)); },
            [&](const TmInl& n) -> std::string {
                return wrap(prec > 2, "inl[" + ty_prec(n.other, 0) + "] " + tm_prec(n.t, 3));
            },
            [&](const TmInr& n) -> std::string {
                return wrap(prec > 2, "inr[" + ty_prec(n.other, 0) + "] " + tm_prec(n.t, 3));
            },
            [&](const TmCase& n) -> std::string {
                std::string x = fresh(n.hx.empty() ? "x" : n.hx);
                std::string l = tm_prec(open_tm1(n.left, fvar(Sort::Lin, x)), 0);
                release(x);
                std::string y = fresh(n.hy.empty() ? "y" : n.hy);
                std::string r = tm_prec(open_tm1(n.right, fvar(Sort::Lin, y)), 0);
                release(y);
                return wrap(prec > 0, "case" + mot(n.motive) + " " + tm_prec(n.scrut, 3) +
                                          " of inl " + x + " -> " + l + " | inr " + y + " -> " + r);
            },
            [&](const TmLetUnit& n) -> std::string {
                return wrap(prec > 0, "let" + mot(n.motive) + " " + tm_prec(n.scrut, 2) +
                                          " be * in " + tm_prec(n.body, 0));
            },
            [&](const TmLetTensor& n) -> std::string {
                std::string x = fresh(n.hx.empty() ? "x" : n.hx);
                std::string y = fresh(n.hy.empty() ? "y" : n.hy);
                std::string body =
                    tm_prec(open_tm(n.body, {fvar(Sort::Lin, x), fvar(Sort::Lin, y)}, 0), 0);
                release(y);
                release(x);
                return wrap(prec > 0, "let" + mot(n.motive) + " " + tm_prec(n.scrut, 2) + " be " + x +
                                          " (x) " + y + " in " + body);
            },
            [&](const TmLetSigma& n) -> std::string {
                std::string x = fresh(n.hx.empty() ? "x" : n.hx);
                std::string y = fresh(n.hy.empty() ? "y" : n.hy);
                std::string body =
                    tm_prec(open_tm(n.body, {fvar(Sort::Int, x), fvar(Sort::Lin, y)}, 0), 0);
                release(y);
                release(x);
                return wrap(prec > 0, "let" + mot(n.motive) + " " + tm_prec(n.scrut, 2) + " be !" + x +
                                          " (x) " + y + " in " + body);
            },
            [&](const TmLetBang& n) -> std::string {
                std::string x = fresh(n.hx.empty() ? "x" : n.hx);
                std::string body = tm_prec(open_tm1(n.body, fvar(Sort::Int, x)), 0);
                release(x);
                return wrap(prec > 0, "let" + mot(n.motive) + " " + tm_prec(n.scrut, 2) + " be !" + x +
                                          " in " + body);
            },
            [&](const TmAbort& n) -> std::string {
                return wrap(prec > 2, "abort" + mot(n.motive) + " " + tm_prec(n.scrut, 3));
            },
            [&](const TmRefl& n) -> std::string { return wrap(prec > 2, "refl !" + tm_prec(n.a, 3)); },
            [&](const TmIf& n) -> std::string {
                std::string m;
                if (n.motive) {
                    if (uses_bvar_ty(n.motive, 0, 0)) {
                        std::string z = fresh(n.hz.empty() ? "z" : n.hz);
                        m = "[" + z + ". " + ty_prec(open_ty1(n.motive, fvar(Sort::Int, z)), 0) + "]";
                        release(z);
                    } else {
                        m = "[" + ty_prec(open_ty1(n.motive, fvar(Sort::Int, "_")), 0) + "]";
                    }
                }
                return wrap(prec > 0, "if" + m + " " + tm_prec(n.scrut, 3) + " then " +
                                          tm_prec(n.thn, 0) + " else " + tm_prec(n.els, 0));
            },
            [&](const TmIdElim& n) -> std::string {
                std::string x = fresh(n.hx.empty() ? "x" : n.hx);
                std::string x2 = fresh(n.hx2.empty() ? "x'" : n.hx2);
                std::string d = ty_prec(
                    open_ty(n.motive, {fvar(Sort::Int, x), fvar(Sort::Int, x2)}, 0), 0);
                release(x2);
                release(x);
                std::string z = fresh(n.hz.empty() ? "z" : n.hz);
                std::string tel;
                for (auto& e : n.tele)
                    tel += ", " + e.var + " : " + ty_prec(open_ty1(e.ty, fvar(Sort::Int, z)), 0);
                std::string body = tm_prec(open_tm1(n.branch, fvar(Sort::Int, z)), 0);
                release(z);
                return wrap(prec > 0,
                            "idelim[" + x + " " + x2 + ". " + d + "] (" + tm_prec(n.a, 0) + ", " +
                                tm_prec(n.a2, 0) + ", " + tm_prec(n.p, 0) + ") with " + z + tel +
                                " -> " + body);
            },
        }, t->node);
    }

    std::string mot(const TyP& m) { return m ? "[" + ty_prec(m, 0) + "]" : ""; }

    void release(const std::string& n) { used_.erase(n); }
};

inline std::string print_ty(const TyP& t, std::set<std::string> scope = {}) {
    Printer p(std::move(scope));
    return p.ty(t);
}

inline std::string print_tm(const TmP& t, std::set<std::string> scope = {}) {
    Printer p(std::move(scope));
    return p.tm(t);
}

// Collects every free name in a term/type so printers can avoid capture.
inline std::set<std::string> scope_of(const TmP& t) {
    std::set<std::string> s;
    for (auto& v : free_vars(t, Sort::Int)) s.insert(v);
    for (auto& v : free_vars(t, Sort::Lin)) s.insert(v);
    return s;
}

inline std::set<std::string> scope_of_ty(const TyP& t) {
    std::set<std::string> s;
    std::vector<std::string> vs;
    free_vars_ty(t, Sort::Int, vs);
    free_vars_ty(t, Sort::Lin, vs);
    for (auto& v : vs) s.insert(v);
    return s;
}

}  // namespace ildtt
