// Random well-typed term generation for property tests.
//
// Terms are grown bottom-up from closed leaves by combinators that are legal
// regardless of their inputs, so every output is well-typed by construction
// (the properties still run the checker over each one).  The linear part of
// every generated term is closed; intuitionistic variables of type A from a
// fixed ambient context may occur free, which is what the substitution
// properties exercise.
//
// Items carry an `inf` flag: whether the term synthesizes its type without an
// ambient expected type.  Scrutinees of eliminators and functions of
// applications are inferred by the checker, so those positions only accept
// inferable items.

#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ildtt/checker.hpp"

namespace ildtt::gen {

inline const char* SIG_SRC =
    "type A;\n"
    "type B(y:A);\n"
    "type C0;\n"
    "const a0 : A;\n"
    "const a1 : A;\n"
    "const c0 : C0;\n"
    "const mk(y:A) : B[y];\n";

struct Item {
    TmP tm;
    TyP ty;
    int depth = 0;
    bool inf = true;
};

struct Gen {
    std::mt19937 rng;
    std::vector<std::string> avars;  // ambient intuitionistic variables of type A

    explicit Gen(unsigned seed, std::vector<std::string> ambient_a = {})
        : rng(seed), avars(std::move(ambient_a)) {}

    int pick(int n) { return (int)(rng() % (unsigned)n); }
    bool coin() { return rng() & 1; }

    TyP tyA() { return mk_ty(TyBase{"A", {}}); }
    TyP tyC() { return mk_ty(TyBase{"C0", {}}); }
    TyP tyB(const TmP& ix) { return mk_ty(TyBase{"B", {ix}}); }

    // a closed-or-ambient intuitionistic term of type A
    TmP a_term() {
        int k = pick(2 + (int)avars.size());
        if (k == 0) return mk_tm(TmConst{"a0", {}});
        if (k == 1) return mk_tm(TmConst{"a1", {}});
        return fvar(Sort::Int, avars[k - 2]);
    }

    Item leaf() {
        switch (pick(8)) {
            case 0: {
                TmP a = a_term();
                return {a, tyA()};
            }
            case 1: return {mk_tm(TmConst{"c0", {}}), tyC()};
            case 2: {
                TmP a = a_term();
                return {mk_tm(TmConst{"mk", {a}}), tyB(a)};
            }
            case 3: return {mk_tm(TmStar{}), mk_ty(TyUnit{})};
            case 4: return {mk_tm(TmTt{}), mk_ty(TyTwo{})};
            case 5: return {mk_tm(TmFf{}), mk_ty(TyTwo{})};
            case 6: return {mk_tm(TmTopUnit{}), mk_ty(TyTop{})};
            default: {
                TmP a = a_term();
                return {mk_tm(TmRefl{a}), mk_ty(TyId{tyA(), a, a})};
            }
        }
    }

    // one grow step over existing items; the result is well-typed whenever the
    // preconditions noted per case hold (grow() only receives what it asks for)
    Item grow(const Item& x, const Item& y, const Item& sx, const Item& sy) {
        int d = 1 + std::max(x.depth, y.depth);
        int ds = 1 + std::max(sx.depth, sy.depth);
        switch (pick(14)) {
            case 0:
                return {mk_tm(TmTensor{x.tm, y.tm}), mk_ty(TyTensor{x.ty, y.ty}), d,
                        x.inf && y.inf};
            case 1: return {mk_tm(TmPair{x.tm, y.tm}), mk_ty(TyWith{x.ty, y.ty}), d, false};
            case 2: return {mk_tm(TmInl{y.ty, x.tm}), mk_ty(TyPlus{x.ty, y.ty}), d, x.inf};
            case 3: return {mk_tm(TmBang{x.tm}), mk_ty(TyBang{x.ty}), d, x.inf};
            case 4: {  // identity abstraction applied: a beta redex
                TmP lam = mk_tm(TmLam{"w", x.ty, bvar(0, 0)});
                return {mk_tm(TmApp{lam, x.tm}), x.ty, d, true};
            }
            case 5: {  // abstraction pairing the bound variable with y
                TmP body = mk_tm(TmTensor{bvar(0, 0), y.tm});
                return {mk_tm(TmLam{"w", x.ty, body}),
                        mk_ty(TyLolli{x.ty, mk_ty(TyTensor{x.ty, y.ty})}), d, y.inf};
            }
            case 6:
                return {mk_tm(TmLetUnit{x.ty, mk_tm(TmStar{}), x.tm}), x.ty, d, true};
            case 7: {  // unpack a literal tensor and swap it (scrutinee is inferred)
                TmP sc = mk_tm(TmTensor{sx.tm, sy.tm});
                TmP body = mk_tm(TmTensor{bvar(0, 1), bvar(0, 0)});
                TyP res = mk_ty(TyTensor{sy.ty, sx.ty});
                return {mk_tm(TmLetTensor{res, sc, "u", "v", body}), res, ds, true};
            }
            case 8: {  // case on a literal inl; the inr binder is a discarded unit
                TmP sc = mk_tm(TmInl{mk_ty(TyUnit{}), sx.tm});
                TmP lb = bvar(0, 0);
                TmP rb = mk_tm(TmLetUnit{nullptr, bvar(0, 0), sx.tm});
                return {mk_tm(TmCase{sx.ty, sc, "u", lb, "v", rb}), sx.ty, ds, true};
            }
            case 9:
                return {mk_tm(TmIf{"", x.ty, coin() ? mk_tm(TmTt{}) : mk_tm(TmFf{}),
                                   x.tm, x.tm}),
                        x.ty, d, true};
            case 10: {  // intuitionistic abstraction (weakened binder), maybe applied
                TmP lam = mk_tm(TmPiLam{"y", tyA(), sx.tm});
                if (coin())
                    return {lam, mk_ty(TyPi{"y", tyA(), sx.ty}), ds, sx.inf};
                return {mk_tm(TmPiApp{lam, a_term()}), sx.ty, ds, true};
            }
            case 11: {  // dependent pair over A
                TmP a = a_term();
                if (coin()) {
                    TyP sg = mk_ty(TySigma{"y", tyA(), mk_ty(TyBase{"B", {bvar(0, 0)}})});
                    return {mk_tm(TmSigmaPair{a, mk_tm(TmConst{"mk", {a}}), sg}), sg, d, true};
                }
                TyP sg = mk_ty(TySigma{"y", tyA(), x.ty});
                return {mk_tm(TmSigmaPair{a, x.tm, sg}), sg, d, true};
            }
            case 12: {  // project from a literal with-pair behind an abstraction
                bool first = coin();
                TmP body = first ? mk_tm(TmFst{bvar(0, 0)}) : mk_tm(TmSnd{bvar(0, 0)});
                TmP lam = mk_tm(TmLam{"w", mk_ty(TyWith{x.ty, y.ty}), body});
                TmP pr = mk_tm(TmPair{x.tm, y.tm});
                return {mk_tm(TmApp{lam, pr}), first ? x.ty : y.ty, d, true};
            }
            default: {  // repack a bang (scrutinee is inferred)
                TmP sc = mk_tm(TmBang{sx.tm});
                TmP body = mk_tm(TmBang{bvar(0, 0)});
                TyP res = mk_ty(TyBang{sx.ty});
                return {mk_tm(TmLetBang{res, sc, "x", body}), res, ds, true};
            }
        }
    }

    // a random item of depth <= cap
    Item item(int cap) {
        std::vector<Item> pool, infp;
        for (int i = 0; i < 3; ++i) {
            pool.push_back(leaf());
            infp.push_back(pool.back());
        }
        int steps = 2 + pick(2 * cap);
        for (int i = 0; i < steps; ++i) {
            const Item& x = pool[pick((int)pool.size())];
            const Item& y = pool[pick((int)pool.size())];
            const Item& sx = infp[pick((int)infp.size())];
            const Item& sy = infp[pick((int)infp.size())];
            Item z = grow(x, y, sx, sy);
            if (z.depth > cap) continue;
            pool.push_back(z);
            if (z.inf) infp.push_back(z);
        }
        return pool.back();
    }
};

}  // namespace ildtt::gen
