#pragma once
// syntax.hpp -- core representation for the linear dependent type theory.
//
// Terms and types are immutable trees in locally nameless style: bound
// variables are two-level de Bruijn references (binder depth, slot within
// the binder), free variables are named and tagged with their sort
// (intuitionistic or linear). Alpha-equivalence is plain structural
// equality, ignoring binder name hints and source spans.

#include <cassert>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ildtt {

enum class Sort : uint8_t { Int, Lin };

inline const char* sort_name(Sort s) { return s == Sort::Int ? "intuitionistic" : "linear"; }

struct Span {
    int line = 0;  // 1-based; 0 = unknown
    int col = 0;
    bool known() const { return line > 0; }
};

struct Ty;
struct Term;
using TyP = std::shared_ptr<const Ty>;
using TmP = std::shared_ptr<const Term>;

// ---------------------------------------------------------------------------
// Type formers
// ---------------------------------------------------------------------------

struct TyBase {  // declared base family, fully applied: B[a1, ..., an]
    std::string name;
    std::vector<TmP> args;  // intuitionistic arguments
};
struct TyUnit {};    // I
struct TyTensor { TyP a, b; };
struct TyLolli { TyP a, b; };
struct TyTop {};     // Top
struct TyWith { TyP a, b; };
struct TyZero {};    // 0
struct TyPlus { TyP a, b; };
struct TyBang { TyP a; };
struct TySigma { std::string hint; TyP dom; TyP body; };  // body: one Int slot
struct TyPi { std::string hint; TyP dom; TyP body; };     // body: one Int slot
struct TyId { TyP a; TmP lhs, rhs; };
struct TyTwo {};     // 2

using TyNode = std::variant<TyBase, TyUnit, TyTensor, TyLolli, TyTop, TyWith, TyZero,
                            TyPlus, TyBang, TySigma, TyPi, TyId, TyTwo>;

struct Ty {
    TyNode node;
    Span span;
    explicit Ty(TyNode n, Span s = {}) : node(std::move(n)), span(s) {}
};

inline TyP mk_ty(TyNode n, Span s = {}) { return std::make_shared<const Ty>(std::move(n), s); }

template <class T>
const T* ty_as(const TyP& t) { return t ? std::get_if<T>(&t->node) : nullptr; }

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

struct TmBVar { int depth; int slot; };          // bound: depth binders out, given slot
struct TmFVar { Sort sort; std::string name; };  // free, named
struct TmConst { std::string name; std::vector<TmP> args; };
struct TmStar {};     // *
struct TmTopUnit {};  // <>
struct TmTt {};
struct TmFf {};
struct TmTensor { TmP a, b; };                    // a (x) b
struct TmSigmaPair { TmP a, b; TyP sigma; };      // !a (x) b at a Sigma type (elaborated)
struct TmBang { TmP a; };                         // !a
struct TmLam { std::string hint; TyP dom; TmP body; };    // \x:A. b    (one Lin slot)
struct TmPiLam { std::string hint; TyP dom; TmP body; };  // \!x:A. b   (one Int slot)
struct TmApp { TmP f, a; };                       // f a
struct TmPiApp { TmP f, a; };                     // f !a (elaborated; a stored bare)
struct TmPair { TmP a, b; };                      // <a, b>
struct TmFst { TmP t; };
struct TmSnd { TmP t; };
struct TmInl { TyP other; TmP t; };               // inl[B] t
struct TmInr { TyP other; TmP t; };               // inr[A] t
struct TmCase {                                   // case[C] t of inl x -> l | inr y -> r
    TyP motive;                                   // null only before checking
    TmP scrut;
    std::string hx; TmP left;                     // left: one Lin slot
    std::string hy; TmP right;                    // right: one Lin slot
};
struct TmLetUnit { TyP motive; TmP scrut; TmP body; };                       // let[A] t be * in b
struct TmLetTensor { TyP motive; TmP scrut; std::string hx, hy; TmP body; }; // body: two Lin slots
struct TmLetSigma { TyP motive; TmP scrut; std::string hx, hy; TmP body; };  // slot0 Int, slot1 Lin
struct TmLetBang { TyP motive; TmP scrut; std::string hx; TmP body; };       // body: one Int slot
struct TmAbort { TyP motive; TmP scrut; };        // abort[B] t
struct TmRefl { TmP a; };                         // refl !a
struct TmIf {                                     // if[z.A] t then u else v
    std::string hz; TyP motive;                   // motive: one Int slot (may be unused)
    TmP scrut, thn, els;
};
struct IdTeleEntry {
    std::string var;  // ambient linear variable consumed by the eliminator
    TyP ty;           // its type as a family over z (one Int slot)
};
struct TmIdElim {  // idelim[x x'. D] (a, a', p) with z, tele -> d
    std::string hx, hx2; TyP motive;              // motive: two Int slots (x, x')
    std::vector<IdTeleEntry> tele;
    std::string hz; TmP branch;                   // branch: one Int slot (z)
    TmP a, a2, p;
};

using TmNode = std::variant<TmBVar, TmFVar, TmConst, TmStar, TmTopUnit, TmTt, TmFf,
                            TmTensor, TmSigmaPair, TmBang, TmLam, TmPiLam, TmApp, TmPiApp,
                            TmPair, TmFst, TmSnd, TmInl, TmInr, TmCase, TmLetUnit,
                            TmLetTensor, TmLetSigma, TmLetBang, TmAbort, TmRefl, TmIf, TmIdElim>;

struct Term {
    TmNode node;
    Span span;
    explicit Term(TmNode n, Span s = {}) : node(std::move(n)), span(s) {}
};

inline TmP mk_tm(TmNode n, Span s = {}) { return std::make_shared<const Term>(std::move(n), s); }

template <class T>
const T* tm_as(const TmP& t) { return t ? std::get_if<T>(&t->node) : nullptr; }

inline TmP fvar(Sort s, std::string name) { return mk_tm(TmFVar{s, std::move(name)}); }
inline TmP bvar(int depth, int slot) { return mk_tm(TmBVar{depth, slot}); }

template <class T, class V, size_t I = 0>
constexpr size_t variant_index() {
    if constexpr (std::is_same_v<std::variant_alternative_t<I, V>, T>) return I;
    else return variant_index<T, V, I + 1>();
}
template <class T> constexpr size_t tm_index() { return variant_index<T, TmNode>(); }
template <class T> constexpr size_t ty_index() { return variant_index<T, TyNode>(); }

// ---------------------------------------------------------------------------
// Visitor helper
// ---------------------------------------------------------------------------

template <class... Fs>
struct overloaded : Fs... { using Fs::operator()...; };
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

// ---------------------------------------------------------------------------
// Opening scopes (replace BVar{depth, slot} by given terms)
// ---------------------------------------------------------------------------

TmP open_tm(const TmP& t, const std::vector<TmP>& repl, int depth);
TyP open_ty(const TyP& t, const std::vector<TmP>& repl, int depth);

inline TyP open_ty1(const TyP& t, const TmP& x) { return open_ty(t, {x}, 0); }
inline TmP open_tm1(const TmP& t, const TmP& x) { return open_tm(t, {x}, 0); }

inline TmP open_tm(const TmP& t, const std::vector<TmP>& repl, int depth) {
    if (!t) return t;
    auto rec = [&](const TmP& s) { return open_tm(s, repl, depth); };
    auto rec1 = [&](const TmP& s) { return open_tm(s, repl, depth + 1); };
    auto recty = [&](const TyP& s) { return open_ty(s, repl, depth); };
    auto recty1 = [&](const TyP& s) { return open_ty(s, repl, depth + 1); };
    Span sp = t->span;
    return std::visit(overloaded{
        [&](const TmBVar& v) -> TmP {
            if (v.depth == depth) {
                assert(v.slot >= 0 && v.slot < (int)repl.size());
                return repl[v.slot];
            }
            assert(v.depth < depth && "open_tm: dangling bound variable");
            return t;
        },
        [&](const TmFVar&) -> TmP { return t; },
        [&](const TmConst& c) -> TmP {
            std::vector<TmP> as;
            as.reserve(c.args.size());
            for (auto& a : c.args) as.push_back(rec(a));
            return mk_tm(TmConst{c.name, std::move(as)}, sp);
        },
        [&](const TmStar&) -> TmP { return t; },
        [&](const TmTopUnit&) -> TmP { return t; },
        [&](const TmTt&) -> TmP { return t; },
        [&](const TmFf&) -> TmP { return t; },
        [&](const TmTensor& n) -> TmP { return mk_tm(TmTensor{rec(n.a), rec(n.b)}, sp); },
        [&](const TmSigmaPair& n) -> TmP {
            return mk_tm(TmSigmaPair{rec(n.a), rec(n.b), recty(n.sigma)}, sp);
        },
        [&](const TmBang& n) -> TmP { return mk_tm(TmBang{rec(n.a)}, sp); },
        [&](const TmLam& n) -> TmP { return mk_tm(TmLam{n.hint, recty(n.dom), rec1(n.body)}, sp); },
        [&](const TmPiLam& n) -> TmP { return mk_tm(TmPiLam{n.hint, recty(n.dom), rec1(n.body)}, sp); },
        [&](const TmApp& n) -> TmP { return mk_tm(TmApp{rec(n.f), rec(n.a)}, sp); },
        [&](const TmPiApp& n) -> TmP { return mk_tm(TmPiApp{rec(n.f), rec(n.a)}, sp); },
        [&](const TmPair& n) -> TmP { return mk_tm(TmPair{rec(n.a), rec(n.b)}, sp); },
        [&](const TmFst& n) -> TmP { return mk_tm(TmFst{rec(n.t)}, sp); },
        [&](const TmSnd& n) -> TmP { return mk_tm(TmSnd{rec(n.t)}, sp); },
        [&](const TmInl& n) -> TmP { return mk_tm(TmInl{recty(n.other), rec(n.t)}, sp); },
        [&](const TmInr& n) -> TmP { return mk_tm(TmInr{recty(n.other), rec(n.t)}, sp); },
        [&](const TmCase& n) -> TmP {
            return mk_tm(TmCase{recty(n.motive), rec(n.scrut), n.hx, rec1(n.left), n.hy, rec1(n.right)}, sp);
        },
        [&](const TmLetUnit& n) -> TmP {
            return mk_tm(TmLetUnit{recty(n.motive), rec(n.scrut), rec(n.body)}, sp);
        },
        [&](const TmLetTensor& n) -> TmP {
            return mk_tm(TmLetTensor{recty(n.motive), rec(n.scrut), n.hx, n.hy, rec1(n.body)}, sp);
        },
        [&](const TmLetSigma& n) -> TmP {
            return mk_tm(TmLetSigma{recty(n.motive), rec(n.scrut), n.hx, n.hy, rec1(n.body)}, sp);
        },
        [&](const TmLetBang& n) -> TmP {
            return mk_tm(TmLetBang{recty(n.motive), rec(n.scrut), n.hx, rec1(n.body)}, sp);
        },
        [&](const TmAbort& n) -> TmP { return mk_tm(TmAbort{recty(n.motive), rec(n.scrut)}, sp); },
        [&](const TmRefl& n) -> TmP { return mk_tm(TmRefl{rec(n.a)}, sp); },
        [&](const TmIf& n) -> TmP {
            return mk_tm(TmIf{n.hz, recty1(n.motive), rec(n.scrut), rec(n.thn), rec(n.els)}, sp);
        },
        [&](const TmIdElim& n) -> TmP {
            std::vector<IdTeleEntry> tele;
            tele.reserve(n.tele.size());
            for (auto& e : n.tele) tele.push_back({e.var, recty1(e.ty)});
            return mk_tm(TmIdElim{n.hx, n.hx2, open_ty(n.motive, repl, depth + 1), std::move(tele),
                                  n.hz, rec1(n.branch), rec(n.a), rec(n.a2), rec(n.p)},
                         sp);
        },
    }, t->node);
}

inline TyP open_ty(const TyP& t, const std::vector<TmP>& repl, int depth) {
    if (!t) return t;
    auto rec = [&](const TyP& s) { return open_ty(s, repl, depth); };
    auto rec1 = [&](const TyP& s) { return open_ty(s, repl, depth + 1); };
    auto rectm = [&](const TmP& s) { return open_tm(s, repl, depth); };
    Span sp = t->span;
    return std::visit(overloaded{
        [&](const TyBase& n) -> TyP {
            std::vector<TmP> as;
            as.reserve(n.args.size());
            for (auto& a : n.args) as.push_back(rectm(a));
            return mk_ty(TyBase{n.name, std::move(as)}, sp);
        },
        [&](const TyUnit&) -> TyP { return t; },
        [&](const TyTensor& n) -> TyP { return mk_ty(TyTensor{rec(n.a), rec(n.b)}, sp); },
        [&](const TyLolli& n) -> TyP { return mk_ty(TyLolli{rec(n.a), rec(n.b)}, sp); },
        [&](const TyTop&) -> TyP { return t; },
        [&](const TyWith& n) -> TyP { return mk_ty(TyWith{rec(n.a), rec(n.b)}, sp); },
        [&](const TyZero&) -> TyP { return t; },
        [&](const TyPlus& n) -> TyP { return mk_ty(TyPlus{rec(n.a), rec(n.b)}, sp); },
        [&](const TyBang& n) -> TyP { return mk_ty(TyBang{rec(n.a)}, sp); },
        [&](const TySigma& n) -> TyP { return mk_ty(TySigma{n.hint, rec(n.dom), rec1(n.body)}, sp); },
        [&](const TyPi& n) -> TyP { return mk_ty(TyPi{n.hint, rec(n.dom), rec1(n.body)}, sp); },
        [&](const TyId& n) -> TyP { return mk_ty(TyId{rec(n.a), rectm(n.lhs), rectm(n.rhs)}, sp); },
        [&](const TyTwo&) -> TyP { return t; },
    }, t->node);
}

// ---------------------------------------------------------------------------
// Closing (abstract named free variables into a new binder level)
// ---------------------------------------------------------------------------

struct CloseSpec {
    Sort sort;
    std::string name;  // free variable to capture; slot = position in the vector
};

TmP close_tm(const TmP& t, const std::vector<CloseSpec>& spec, int depth);
TyP close_ty(const TyP& t, const std::vector<CloseSpec>& spec, int depth);

namespace detail {
template <class NodeP, class RecF>
NodeP close_generic(const NodeP& t, const std::vector<CloseSpec>& spec, int depth, RecF&&);
}

inline TmP close_tm(const TmP& t, const std::vector<CloseSpec>& spec, int depth) {
    if (!t) return t;
    auto rec = [&](const TmP& s) { return close_tm(s, spec, depth); };
    auto rec1 = [&](const TmP& s) { return close_tm(s, spec, depth + 1); };
    auto recty = [&](const TyP& s) { return close_ty(s, spec, depth); };
    auto recty1 = [&](const TyP& s) { return close_ty(s, spec, depth + 1); };
    Span sp = t->span;
    return std::visit(overloaded{
        [&](const TmBVar&) -> TmP { return t; },
        [&](const TmFVar& v) -> TmP {
            for (size_t i = 0; i < spec.size(); ++i)
                if (spec[i].sort == v.sort && spec[i].name == v.name)
                    return mk_tm(TmBVar{depth, (int)i}, sp);
            return t;
        },
        [&](const TmConst& c) -> TmP {
            std::vector<TmP> as;
            as.reserve(c.args.size());
            for (auto& a : c.args) as.push_back(rec(a));
            return mk_tm(TmConst{c.name, std::move(as)}, sp);
        },
        [&](const TmStar&) -> TmP { return t; },
        [&](const TmTopUnit&) -> TmP { return t; },
        [&](const TmTt&) -> TmP { return t; },
        [&](const TmFf&) -> TmP { return t; },
        [&](const TmTensor& n) -> TmP { return mk_tm(TmTensor{rec(n.a), rec(n.b)}, sp); },
        [&](const TmSigmaPair& n) -> TmP {
            return mk_tm(TmSigmaPair{rec(n.a), rec(n.b), recty(n.sigma)}, sp);
        },
        [&](const TmBang& n) -> TmP { return mk_tm(TmBang{rec(n.a)}, sp); },
        [&](const TmLam& n) -> TmP { return mk_tm(TmLam{n.hint, recty(n.dom), rec1(n.body)}, sp); },
        [&](const TmPiLam& n) -> TmP { return mk_tm(TmPiLam{n.hint, recty(n.dom), rec1(n.body)}, sp); },
        [&](const TmApp& n) -> TmP { return mk_tm(TmApp{rec(n.f), rec(n.a)}, sp); },
        [&](const TmPiApp& n) -> TmP { return mk_tm(TmPiApp{rec(n.f), rec(n.a)}, sp); },
        [&](const TmPair& n) -> TmP { return mk_tm(TmPair{rec(n.a), rec(n.b)}, sp); },
        [&](const TmFst& n) -> TmP { return mk_tm(TmFst{rec(n.t)}, sp); },
        [&](const TmSnd& n) -> TmP { return mk_tm(TmSnd{rec(n.t)}, sp); },
        [&](const TmInl& n) -> TmP { return mk_tm(TmInl{recty(n.other), rec(n.t)}, sp); },
        [&](const TmInr& n) -> TmP { return mk_tm(TmInr{recty(n.other), rec(n.t)}, sp); },
        [&](const TmCase& n) -> TmP {
            return mk_tm(TmCase{recty(n.motive), rec(n.scrut), n.hx, rec1(n.left), n.hy, rec1(n.right)}, sp);
        },
        [&](const TmLetUnit& n) -> TmP {
            return mk_tm(TmLetUnit{recty(n.motive), rec(n.scrut), rec(n.body)}, sp);
        },
        [&](const TmLetTensor& n) -> TmP {
            return mk_tm(TmLetTensor{recty(n.motive), rec(n.scrut), n.hx, n.hy, rec1(n.body)}, sp);
        },
        [&](const TmLetSigma& n) -> TmP {
            return mk_tm(TmLetSigma{recty(n.motive), rec(n.scrut), n.hx, n.hy, rec1(n.body)}, sp);
        },
        [&](const TmLetBang& n) -> TmP {
            return mk_tm(TmLetBang{recty(n.motive), rec(n.scrut), n.hx, rec1(n.body)}, sp);
        },
        [&](const TmAbort& n) -> TmP { return mk_tm(TmAbort{recty(n.motive), rec(n.scrut)}, sp); },
        [&](const TmRefl& n) -> TmP { return mk_tm(TmRefl{rec(n.a)}, sp); },
        [&](const TmIf& n) -> TmP {
            return mk_tm(TmIf{n.hz, recty1(n.motive), rec(n.scrut), rec(n.thn), rec(n.els)}, sp);
        },
        [&](const TmIdElim& n) -> TmP {
            std::vector<IdTeleEntry> tele;
            tele.reserve(n.tele.size());
            for (auto& e : n.tele) tele.push_back({e.var, recty1(e.ty)});
            return mk_tm(TmIdElim{n.hx, n.hx2, close_ty(n.motive, spec, depth + 1), std::move(tele),
                                  n.hz, rec1(n.branch), rec(n.a), rec(n.a2), rec(n.p)},
                         sp);
        },
    }, t->node);
}

inline TyP close_ty(const TyP& t, const std::vector<CloseSpec>& spec, int depth) {
    if (!t) return t;
    auto rec = [&](const TyP& s) { return close_ty(s, spec, depth); };
    auto rec1 = [&](const TyP& s) { return close_ty(s, spec, depth + 1); };
    auto rectm = [&](const TmP& s) { return close_tm(s, spec, depth); };
    Span sp = t->span;
    return std::visit(overloaded{
        [&](const TyBase& n) -> TyP {
            std::vector<TmP> as;
            as.reserve(n.args.size());
            for (auto& a : n.args) as.push_back(rectm(a));
            return mk_ty(TyBase{n.name, std::move(as)}, sp);
        },
        [&](const TyUnit&) -> TyP { return t; },
        [&](const TyTensor& n) -> TyP { return mk_ty(TyTensor{rec(n.a), rec(n.b)}, sp); },
        [&](const TyLolli& n) -> TyP { return mk_ty(TyLolli{rec(n.a), rec(n.b)}, sp); },
        [&](const TyTop&) -> TyP { return t; },
        [&](const TyWith& n) -> TyP { return mk_ty(TyWith{rec(n.a), rec(n.b)}, sp); },
        [&](const TyZero&) -> TyP { return t; },
        [&](const TyPlus& n) -> TyP { return mk_ty(TyPlus{rec(n.a), rec(n.b)}, sp); },
        [&](const TyBang& n) -> TyP { return mk_ty(TyBang{rec(n.a)}, sp); },
        [&](const TySigma& n) -> TyP { return mk_ty(TySigma{n.hint, rec(n.dom), rec1(n.body)}, sp); },
        [&](const TyPi& n) -> TyP { return mk_ty(TyPi{n.hint, rec(n.dom), rec1(n.body)}, sp); },
        [&](const TyId& n) -> TyP { return mk_ty(TyId{rec(n.a), rectm(n.lhs), rectm(n.rhs)}, sp); },
        [&](const TyTwo&) -> TyP { return t; },
    }, t->node);
}

// ---------------------------------------------------------------------------
// Substitution for free variables
// ---------------------------------------------------------------------------

inline TmP subst_tm(const TmP& t, Sort sort, const std::string& name, const TmP& repl);
inline TyP subst_ty(const TyP& t, Sort sort, const std::string& name, const TmP& repl);

// subst_int / subst_lin on terms; capture is impossible in locally nameless form.
inline TmP subst_tm(const TmP& t, Sort sort, const std::string& name, const TmP& repl) {
    if (!t) return t;
    auto rec = [&](const TmP& s) { return subst_tm(s, sort, name, repl); };
    auto recty = [&](const TyP& s) { return subst_ty(s, sort, name, repl); };
    Span sp = t->span;
    return std::visit(overloaded{
        [&](const TmBVar&) -> TmP { return t; },
        [&](const TmFVar& v) -> TmP {
            if (v.sort == sort && v.name == name) return repl;
            return t;
        },
        [&](const TmConst& c) -> TmP {
            std::vector<TmP> as;
            as.reserve(c.args.size());
            for (auto& a : c.args) as.push_back(rec(a));
            return mk_tm(TmConst{c.name, std::move(as)}, sp);
        },
        [&](const TmStar&) -> TmP { return t; },
        [&](const TmTopUnit&) -> TmP { return t; },
        [&](const TmTt&) -> TmP { return t; },
        [&](const TmFf&) -> TmP { return t; },
        [&](const TmTensor& n) -> TmP { return mk_tm(TmTensor{rec(n.a), rec(n.b)}, sp); },
        [&](const TmSigmaPair& n) -> TmP {
            return mk_tm(TmSigmaPair{rec(n.a), rec(n.b), recty(n.sigma)}, sp);
        },
        [&](const TmBang& n) -> TmP { return mk_tm(TmBang{rec(n.a)}, sp); },
        [&](const TmLam& n) -> TmP { return mk_tm(TmLam{n.hint, recty(n.dom), rec(n.body)}, sp); },
        [&](const TmPiLam& n) -> TmP { return mk_tm(TmPiLam{n.hint, recty(n.dom), rec(n.body)}, sp); },
        [&](const TmApp& n) -> TmP { return mk_tm(TmApp{rec(n.f), rec(n.a)}, sp); },
        [&](const TmPiApp& n) -> TmP { return mk_tm(TmPiApp{rec(n.f), rec(n.a)}, sp); },
        [&](const TmPair& n) -> TmP { return mk_tm(TmPair{rec(n.a), rec(n.b)}, sp); },
        [&](const TmFst& n) -> TmP { return mk_tm(TmFst{rec(n.t)}, sp); },
        [&](const TmSnd& n) -> TmP { return mk_tm(TmSnd{rec(n.t)}, sp); },
        [&](const TmInl& n) -> TmP { return mk_tm(TmInl{recty(n.other), rec(n.t)}, sp); },
        [&](const TmInr& n) -> TmP { return mk_tm(TmInr{recty(n.other), rec(n.t)}, sp); },
        [&](const TmCase& n) -> TmP {
            return mk_tm(TmCase{recty(n.motive), rec(n.scrut), n.hx, rec(n.left), n.hy, rec(n.right)}, sp);
        },
        [&](const TmLetUnit& n) -> TmP {
            return mk_tm(TmLetUnit{recty(n.motive), rec(n.scrut), rec(n.body)}, sp);
        },
        [&](const TmLetTensor& n) -> TmP {
            return mk_tm(TmLetTensor{recty(n.motive), rec(n.scrut), n.hx, n.hy, rec(n.body)}, sp);
        },
        [&](const TmLetSigma& n) -> TmP {
            return mk_tm(TmLetSigma{recty(n.motive), rec(n.scrut), n.hx, n.hy, rec(n.body)}, sp);
        },
        [&](const TmLetBang& n) -> TmP {
            return mk_tm(TmLetBang{recty(n.motive), rec(n.scrut), n.hx, rec(n.body)}, sp);
        },
        [&](const TmAbort& n) -> TmP { return mk_tm(TmAbort{recty(n.motive), rec(n.scrut)}, sp); },
        [&](const TmRefl& n) -> TmP { return mk_tm(TmRefl{rec(n.a)}, sp); },
        [&](const TmIf& n) -> TmP {
            return mk_tm(TmIf{n.hz, recty(n.motive), rec(n.scrut), rec(n.thn), rec(n.els)}, sp);
        },
        [&](const TmIdElim& n) -> TmP {
            std::vector<IdTeleEntry> tele;
            tele.reserve(n.tele.size());
            for (auto& e : n.tele) {
                // telescope entries name ambient linear variables; a linear
                // substitution never targets them (they are binder-like), but
                // the type families may mention intuitionistic frees.
                tele.push_back({e.var, recty(e.ty)});
            }
            return mk_tm(TmIdElim{n.hx, n.hx2, subst_ty(n.motive, sort, name, repl), std::move(tele),
                                  n.hz, rec(n.branch), rec(n.a), rec(n.a2), rec(n.p)},
                         sp);
        },
    }, t->node);
}

inline TyP subst_ty(const TyP& t, Sort sort, const std::string& name, const TmP& repl) {
    if (!t) return t;
    auto rec = [&](const TyP& s) { return subst_ty(s, sort, name, repl); };
    auto rectm = [&](const TmP& s) { return subst_tm(s, sort, name, repl); };
    Span sp = t->span;
    return std::visit(overloaded{
        [&](const TyBase& n) -> TyP {
            std::vector<TmP> as;
            as.reserve(n.args.size());
            for (auto& a : n.args) as.push_back(rectm(a));
            return mk_ty(TyBase{n.name, std::move(as)}, sp);
        },
        [&](const TyUnit&) -> TyP { return t; },
        [&](const TyTensor& n) -> TyP { return mk_ty(TyTensor{rec(n.a), rec(n.b)}, sp); },
        [&](const TyLolli& n) -> TyP { return mk_ty(TyLolli{rec(n.a), rec(n.b)}, sp); },
        [&](const TyTop&) -> TyP { return t; },
        [&](const TyWith& n) -> TyP { return mk_ty(TyWith{rec(n.a), rec(n.b)}, sp); },
        [&](const TyZero&) -> TyP { return t; },
        [&](const TyPlus& n) -> TyP { return mk_ty(TyPlus{rec(n.a), rec(n.b)}, sp); },
        [&](const TyBang& n) -> TyP { return mk_ty(TyBang{rec(n.a)}, sp); },
        [&](const TySigma& n) -> TyP { return mk_ty(TySigma{n.hint, rec(n.dom), rec(n.body)}, sp); },
        [&](const TyPi& n) -> TyP { return mk_ty(TyPi{n.hint, rec(n.dom), rec(n.body)}, sp); },
        [&](const TyId& n) -> TyP { return mk_ty(TyId{rec(n.a), rectm(n.lhs), rectm(n.rhs)}, sp); },
        [&](const TyTwo&) -> TyP { return t; },
    }, t->node);
}

inline TmP subst_int(const TmP& t, const std::string& x, const TmP& a) {
    return subst_tm(t, Sort::Int, x, a);
}
inline TmP subst_lin(const TmP& t, const std::string& x, const TmP& a) {
    return subst_tm(t, Sort::Lin, x, a);
}
inline TyP subst_int_ty(const TyP& t, const std::string& x, const TmP& a) {
    return subst_ty(t, Sort::Int, x, a);
}

// ---------------------------------------------------------------------------
// Free variables (in order of first occurrence; linear frees listed once per use)
// ---------------------------------------------------------------------------

void free_vars_tm(const TmP& t, Sort sort, std::vector<std::string>& out);
void free_vars_ty(const TyP& t, Sort sort, std::vector<std::string>& out);

inline void free_vars_tm(const TmP& t, Sort sort, std::vector<std::string>& out) {
    if (!t) return;
    std::visit(overloaded{
        [&](const TmBVar&) {},
        [&](const TmFVar& v) { if (v.sort == sort) out.push_back(v.name); },
        [&](const TmConst& c) { for (auto& a : c.args) free_vars_tm(a, sort, out); },
        [&](const TmStar&) {},
        [&](const TmTopUnit&) {},
        [&](const TmTt&) {},
        [&](const TmFf&) {},
        [&](const TmTensor& n) { free_vars_tm(n.a, sort, out); free_vars_tm(n.b, sort, out); },
        [&](const TmSigmaPair& n) {
            free_vars_tm(n.a, sort, out); free_vars_tm(n.b, sort, out);
            free_vars_ty(n.sigma, sort, out);
        },
        [&](const TmBang& n) { free_vars_tm(n.a, sort, out); },
        [&](const TmLam& n) { free_vars_ty(n.dom, sort, out); free_vars_tm(n.body, sort, out); },
        [&](const TmPiLam& n) { free_vars_ty(n.dom, sort, out); free_vars_tm(n.body, sort, out); },
        [&](const TmApp& n) { free_vars_tm(n.f, sort, out); free_vars_tm(n.a, sort, out); },
        [&](const TmPiApp& n) { free_vars_tm(n.f, sort, out); free_vars_tm(n.a, sort, out); },
        [&](const TmPair& n) { free_vars_tm(n.a, sort, out); free_vars_tm(n.b, sort, out); },
        [&](const TmFst& n) { free_vars_tm(n.t, sort, out); },
        [&](const TmSnd& n) { free_vars_tm(n.t, sort, out); },
        [&](const TmInl& n) { free_vars_ty(n.other, sort, out); free_vars_tm(n.t, sort, out); },
        [&](const TmInr& n) { free_vars_ty(n.other, sort, out); free_vars_tm(n.t, sort, out); },
        [&](const TmCase& n) {
            free_vars_ty(n.motive, sort, out); free_vars_tm(n.scrut, sort, out);
            free_vars_tm(n.left, sort, out); free_vars_tm(n.right, sort, out);
        },
        [&](const TmLetUnit& n) {
            free_vars_ty(n.motive, sort, out); free_vars_tm(n.scrut, sort, out);
            free_vars_tm(n.body, sort, out);
        },
        [&](const TmLetTensor& n) {
            free_vars_ty(n.motive, sort, out); free_vars_tm(n.scrut, sort, out);
            free_vars_tm(n.body, sort, out);
        },
        [&](const TmLetSigma& n) {
            free_vars_ty(n.motive, sort, out); free_vars_tm(n.scrut, sort, out);
            free_vars_tm(n.body, sort, out);
        },
        [&](const TmLetBang& n) {
            free_vars_ty(n.motive, sort, out); free_vars_tm(n.scrut, sort, out);
            free_vars_tm(n.body, sort, out);
        },
        [&](const TmAbort& n) { free_vars_ty(n.motive, sort, out); free_vars_tm(n.scrut, sort, out); },
        [&](const TmRefl& n) { free_vars_tm(n.a, sort, out); },
        [&](const TmIf& n) {
            free_vars_ty(n.motive, sort, out); free_vars_tm(n.scrut, sort, out);
            free_vars_tm(n.thn, sort, out); free_vars_tm(n.els, sort, out);
        },
        [&](const TmIdElim& n) {
            free_vars_ty(n.motive, sort, out);
            for (auto& e : n.tele) {
                if (sort == Sort::Lin) out.push_back(e.var);
                free_vars_ty(e.ty, sort, out);
            }
            free_vars_tm(n.branch, sort, out);
            free_vars_tm(n.a, sort, out); free_vars_tm(n.a2, sort, out);
            free_vars_tm(n.p, sort, out);
        },
    }, t->node);
}

inline void free_vars_ty(const TyP& t, Sort sort, std::vector<std::string>& out) {
    if (!t) return;
    std::visit(overloaded{
        [&](const TyBase& n) { for (auto& a : n.args) free_vars_tm(a, sort, out); },
        [&](const TyUnit&) {},
        [&](const TyTensor& n) { free_vars_ty(n.a, sort, out); free_vars_ty(n.b, sort, out); },
        [&](const TyLolli& n) { free_vars_ty(n.a, sort, out); free_vars_ty(n.b, sort, out); },
        [&](const TyTop&) {},
        [&](const TyWith& n) { free_vars_ty(n.a, sort, out); free_vars_ty(n.b, sort, out); },
        [&](const TyZero&) {},
        [&](const TyPlus& n) { free_vars_ty(n.a, sort, out); free_vars_ty(n.b, sort, out); },
        [&](const TyBang& n) { free_vars_ty(n.a, sort, out); },
        [&](const TySigma& n) { free_vars_ty(n.dom, sort, out); free_vars_ty(n.body, sort, out); },
        [&](const TyPi& n) { free_vars_ty(n.dom, sort, out); free_vars_ty(n.body, sort, out); },
        [&](const TyId& n) {
            free_vars_ty(n.a, sort, out);
            free_vars_tm(n.lhs, sort, out); free_vars_tm(n.rhs, sort, out);
        },
        [&](const TyTwo&) {},
    }, t->node);
}

inline std::vector<std::string> free_vars(const TmP& t, Sort sort) {
    std::vector<std::string> out;
    free_vars_tm(t, sort, out);
    return out;
}

inline bool uses_free(const TmP& t, Sort sort, const std::string& name) {
    auto vs = free_vars(t, sort);
    for (auto& v : vs)
        if (v == name) return true;
    return false;
}

inline bool uses_free_ty(const TyP& t, Sort sort, const std::string& name) {
    std::vector<std::string> out;
    free_vars_ty(t, sort, out);
    for (auto& v : out)
        if (v == name) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Bound-variable queries (does the scope actually use slot i of level `depth`?)
// ---------------------------------------------------------------------------

bool uses_bvar_tm(const TmP& t, int depth, int slot);
bool uses_bvar_ty(const TyP& t, int depth, int slot);

inline bool uses_bvar_tm(const TmP& t, int depth, int slot) {
    if (!t) return false;
    bool any = false;
    std::visit(overloaded{
        [&](const TmBVar& v) { any = (v.depth == depth && (slot < 0 || v.slot == slot)); },
        [&](const TmFVar&) {},
        [&](const TmConst& c) { for (auto& a : c.args) any = any || uses_bvar_tm(a, depth, slot); },
        [&](const TmStar&) {},
        [&](const TmTopUnit&) {},
        [&](const TmTt&) {},
        [&](const TmFf&) {},
        [&](const TmTensor& n) { any = uses_bvar_tm(n.a, depth, slot) || uses_bvar_tm(n.b, depth, slot); },
        [&](const TmSigmaPair& n) {
            any = uses_bvar_tm(n.a, depth, slot) || uses_bvar_tm(n.b, depth, slot) ||
                  uses_bvar_ty(n.sigma, depth, slot);
        },
        [&](const TmBang& n) { any = uses_bvar_tm(n.a, depth, slot); },
        [&](const TmLam& n) { any = uses_bvar_ty(n.dom, depth, slot) || uses_bvar_tm(n.body, depth + 1, slot); },
        [&](const TmPiLam& n) { any = uses_bvar_ty(n.dom, depth, slot) || uses_bvar_tm(n.body, depth + 1, slot); },
        [&](const TmApp& n) { any = uses_bvar_tm(n.f, depth, slot) || uses_bvar_tm(n.a, depth, slot); },
        [&](const TmPiApp& n) { any = uses_bvar_tm(n.f, depth, slot) || uses_bvar_tm(n.a, depth, slot); },
        [&](const TmPair& n) { any = uses_bvar_tm(n.a, depth, slot) || uses_bvar_tm(n.b, depth, slot); },
        [&](const TmFst& n) { any = uses_bvar_tm(n.t, depth, slot); },
        [&](const TmSnd& n) { any = uses_bvar_tm(n.t, depth, slot); },
        [&](const TmInl& n) { any = uses_bvar_ty(n.other, depth, slot) || uses_bvar_tm(n.t, depth, slot); },
        [&](const TmInr& n) { any = uses_bvar_ty(n.other, depth, slot) || uses_bvar_tm(n.t, depth, slot); },
        [&](const TmCase& n) {
            any = uses_bvar_ty(n.motive, depth, slot) || uses_bvar_tm(n.scrut, depth, slot) ||
                  uses_bvar_tm(n.left, depth + 1, slot) || uses_bvar_tm(n.right, depth + 1, slot);
        },
        [&](const TmLetUnit& n) {
            any = uses_bvar_ty(n.motive, depth, slot) || uses_bvar_tm(n.scrut, depth, slot) ||
                  uses_bvar_tm(n.body, depth, slot);
        },
        [&](const TmLetTensor& n) {
            any = uses_bvar_ty(n.motive, depth, slot) || uses_bvar_tm(n.scrut, depth, slot) ||
                  uses_bvar_tm(n.body, depth + 1, slot);
        },
        [&](const TmLetSigma& n) {
            any = uses_bvar_ty(n.motive, depth, slot) || uses_bvar_tm(n.scrut, depth, slot) ||
                  uses_bvar_tm(n.body, depth + 1, slot);
        },
        [&](const TmLetBang& n) {
            any = uses_bvar_ty(n.motive, depth, slot) || uses_bvar_tm(n.scrut, depth, slot) ||
                  uses_bvar_tm(n.body, depth + 1, slot);
        },
        [&](const TmAbort& n) { any = uses_bvar_ty(n.motive, depth, slot) || uses_bvar_tm(n.scrut, depth, slot); },
        [&](const TmRefl& n) { any = uses_bvar_tm(n.a, depth, slot); },
        [&](const TmIf& n) {
            any = uses_bvar_ty(n.motive, depth + 1, slot) || uses_bvar_tm(n.scrut, depth, slot) ||
                  uses_bvar_tm(n.thn, depth, slot) || uses_bvar_tm(n.els, depth, slot);
        },
        [&](const TmIdElim& n) {
            any = uses_bvar_ty(n.motive, depth + 1, slot);
            for (auto& e : n.tele) any = any || uses_bvar_ty(e.ty, depth + 1, slot);
            any = any || uses_bvar_tm(n.branch, depth + 1, slot) || uses_bvar_tm(n.a, depth, slot) ||
                  uses_bvar_tm(n.a2, depth, slot) || uses_bvar_tm(n.p, depth, slot);
        },
    }, t->node);
    return any;
}

inline bool uses_bvar_ty(const TyP& t, int depth, int slot) {
    if (!t) return false;
    bool any = false;
    std::visit(overloaded{
        [&](const TyBase& n) { for (auto& a : n.args) any = any || uses_bvar_tm(a, depth, slot); },
        [&](const TyUnit&) {},
        [&](const TyTensor& n) { any = uses_bvar_ty(n.a, depth, slot) || uses_bvar_ty(n.b, depth, slot); },
        [&](const TyLolli& n) { any = uses_bvar_ty(n.a, depth, slot) || uses_bvar_ty(n.b, depth, slot); },
        [&](const TyTop&) {},
        [&](const TyWith& n) { any = uses_bvar_ty(n.a, depth, slot) || uses_bvar_ty(n.b, depth, slot); },
        [&](const TyZero&) {},
        [&](const TyPlus& n) { any = uses_bvar_ty(n.a, depth, slot) || uses_bvar_ty(n.b, depth, slot); },
        [&](const TyBang& n) { any = uses_bvar_ty(n.a, depth, slot); },
        [&](const TySigma& n) { any = uses_bvar_ty(n.dom, depth, slot) || uses_bvar_ty(n.body, depth + 1, slot); },
        [&](const TyPi& n) { any = uses_bvar_ty(n.dom, depth, slot) || uses_bvar_ty(n.body, depth + 1, slot); },
        [&](const TyId& n) {
            any = uses_bvar_ty(n.a, depth, slot) || uses_bvar_tm(n.lhs, depth, slot) ||
                  uses_bvar_tm(n.rhs, depth, slot);
        },
        [&](const TyTwo&) {},
    }, t->node);
    return any;
}

// ---------------------------------------------------------------------------
// Alpha-equality: structural, ignoring hints and spans
// ---------------------------------------------------------------------------

bool alpha_eq(const TmP& a, const TmP& b);
bool alpha_eq_ty(const TyP& a, const TyP& b);

inline bool alpha_eq(const TmP& a, const TmP& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->node.index() != b->node.index()) return false;
    return std::visit(overloaded{
        [&](const TmBVar& x) { auto& y = std::get<TmBVar>(b->node); return x.depth == y.depth && x.slot == y.slot; },
        [&](const TmFVar& x) { auto& y = std::get<TmFVar>(b->node); return x.sort == y.sort && x.name == y.name; },
        [&](const TmConst& x) {
            auto& y = std::get<TmConst>(b->node);
            if (x.name != y.name || x.args.size() != y.args.size()) return false;
            for (size_t i = 0; i < x.args.size(); ++i)
                if (!alpha_eq(x.args[i], y.args[i])) return false;
            return true;
        },
        [&](const TmStar&) { return true; },
        [&](const TmTopUnit&) { return true; },
        [&](const TmTt&) { return true; },
        [&](const TmFf&) { return true; },
        [&](const TmTensor& x) { auto& y = std::get<TmTensor>(b->node); return alpha_eq(x.a, y.a) && alpha_eq(x.b, y.b); },
        [&](const TmSigmaPair& x) {
            auto& y = std::get<TmSigmaPair>(b->node);
            return alpha_eq(x.a, y.a) && alpha_eq(x.b, y.b) && alpha_eq_ty(x.sigma, y.sigma);
        },
        [&](const TmBang& x) { return alpha_eq(x.a, std::get<TmBang>(b->node).a); },
        [&](const TmLam& x) {
            auto& y = std::get<TmLam>(b->node);
            return alpha_eq_ty(x.dom, y.dom) && alpha_eq(x.body, y.body);
        },
        [&](const TmPiLam& x) {
            auto& y = std::get<TmPiLam>(b->node);
            return alpha_eq_ty(x.dom, y.dom) && alpha_eq(x.body, y.body);
        },
        [&](const TmApp& x) { auto& y = std::get<TmApp>(b->node); return alpha_eq(x.f, y.f) && alpha_eq(x.a, y.a); },
        [&](const TmPiApp& x) { auto& y = std::get<TmPiApp>(b->node); return alpha_eq(x.f, y.f) && alpha_eq(x.a, y.a); },
        [&](const TmPair& x) { auto& y = std::get<TmPair>(b->node); return alpha_eq(x.a, y.a) && alpha_eq(x.b, y.b); },
        [&](const TmFst& x) { return alpha_eq(x.t, std::get<TmFst>(b->node).t); },
        [&](const TmSnd& x) { return alpha_eq(x.t, std::get<TmSnd>(b->node).t); },
        [&](const TmInl& x) {
            auto& y = std::get<TmInl>(b->node);
            return alpha_eq_ty(x.other, y.other) && alpha_eq(x.t, y.t);
        },
        [&](const TmInr& x) {
            auto& y = std::get<TmInr>(b->node);
            return alpha_eq_ty(x.other, y.other) && alpha_eq(x.t, y.t);
        },
        [&](const TmCase& x) {
            auto& y = std::get<TmCase>(b->node);
            return alpha_eq_ty(x.motive, y.motive) && alpha_eq(x.scrut, y.scrut) &&
                   alpha_eq(x.left, y.left) && alpha_eq(x.right, y.right);
        },
        [&](const TmLetUnit& x) {
            auto& y = std::get<TmLetUnit>(b->node);
            return alpha_eq_ty(x.motive, y.motive) && alpha_eq(x.scrut, y.scrut) && alpha_eq(x.body, y.body);
        },
        [&](const TmLetTensor& x) {
            auto& y = std::get<TmLetTensor>(b->node);
            return alpha_eq_ty(x.motive, y.motive) && alpha_eq(x.scrut, y.scrut) && alpha_eq(x.body, y.body);
        },
        [&](const TmLetSigma& x) {
            auto& y = std::get<TmLetSigma>(b->node);
            return alpha_eq_ty(x.motive, y.motive) && alpha_eq(x.scrut, y.scrut) && alpha_eq(x.body, y.body);
        },
        [&](const TmLetBang& x) {
            auto& y = std::get<TmLetBang>(b->node);
            return alpha_eq_ty(x.motive, y.motive) && alpha_eq(x.scrut, y.scrut) && alpha_eq(x.body, y.body);
        },
        [&](const TmAbort& x) {
            auto& y = std::get<TmAbort>(b->node);
            return alpha_eq_ty(x.motive, y.motive) && alpha_eq(x.scrut, y.scrut);
        },
        [&](const TmRefl& x) { return alpha_eq(x.a, std::get<TmRefl>(b->node).a); },
        [&](const TmIf& x) {
            auto& y = std::get<TmIf>(b->node);
            return alpha_eq_ty(x.motive, y.motive) && alpha_eq(x.scrut, y.scrut) &&
                   alpha_eq(x.thn, y.thn) && alpha_eq(x.els, y.els);
        },
        [&](const TmIdElim& x) {
            auto& y = std::get<TmIdElim>(b->node);
            if (x.tele.size() != y.tele.size()) return false;
            for (size_t i = 0; i < x.tele.size(); ++i)
                if (x.tele[i].var != y.tele[i].var || !alpha_eq_ty(x.tele[i].ty, y.tele[i].ty))
                    return false;
            return alpha_eq_ty(x.motive, y.motive) && alpha_eq(x.branch, y.branch) &&
                   alpha_eq(x.a, y.a) && alpha_eq(x.a2, y.a2) && alpha_eq(x.p, y.p);
        },
    }, a->node);
}

inline bool alpha_eq_ty(const TyP& a, const TyP& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->node.index() != b->node.index()) return false;
    return std::visit(overloaded{
        [&](const TyBase& x) {
            auto& y = std::get<TyBase>(b->node);
            if (x.name != y.name || x.args.size() != y.args.size()) return false;
            for (size_t i = 0; i < x.args.size(); ++i)
                if (!alpha_eq(x.args[i], y.args[i])) return false;
            return true;
        },
        [&](const TyUnit&) { return true; },
        [&](const TyTensor& x) { auto& y = std::get<TyTensor>(b->node); return alpha_eq_ty(x.a, y.a) && alpha_eq_ty(x.b, y.b); },
        [&](const TyLolli& x) { auto& y = std::get<TyLolli>(b->node); return alpha_eq_ty(x.a, y.a) && alpha_eq_ty(x.b, y.b); },
        [&](const TyTop&) { return true; },
        [&](const TyWith& x) { auto& y = std::get<TyWith>(b->node); return alpha_eq_ty(x.a, y.a) && alpha_eq_ty(x.b, y.b); },
        [&](const TyZero&) { return true; },
        [&](const TyPlus& x) { auto& y = std::get<TyPlus>(b->node); return alpha_eq_ty(x.a, y.a) && alpha_eq_ty(x.b, y.b); },
        [&](const TyBang& x) { return alpha_eq_ty(x.a, std::get<TyBang>(b->node).a); },
        [&](const TySigma& x) {
            auto& y = std::get<TySigma>(b->node);
            return alpha_eq_ty(x.dom, y.dom) && alpha_eq_ty(x.body, y.body);
        },
        [&](const TyPi& x) {
            auto& y = std::get<TyPi>(b->node);
            return alpha_eq_ty(x.dom, y.dom) && alpha_eq_ty(x.body, y.body);
        },
        [&](const TyId& x) {
            auto& y = std::get<TyId>(b->node);
            return alpha_eq_ty(x.a, y.a) && alpha_eq(x.lhs, y.lhs) && alpha_eq(x.rhs, y.rhs);
        },
        [&](const TyTwo&) { return true; },
    }, a->node);
}

// ---------------------------------------------------------------------------
// Contexts and signatures
// ---------------------------------------------------------------------------

struct CtxEntry {
    std::string name;
    TyP ty;  // locally closed; free names refer to earlier intuitionistic entries
};

struct DualContext {
    std::vector<CtxEntry> intc;  // weakening/contraction allowed
    std::vector<CtxEntry> linc;  // used exactly once

    const TyP* lookup_int(const std::string& n) const {
        for (auto it = intc.rbegin(); it != intc.rend(); ++it)
            if (it->name == n) return &it->ty;
        return nullptr;
    }
    const TyP* lookup_lin(const std::string& n) const {
        for (auto it = linc.rbegin(); it != linc.rend(); ++it)
            if (it->name == n) return &it->ty;
        return nullptr;
    }
};

struct BaseDecl {
    std::string name;
    std::vector<CtxEntry> tele;  // intuitionistic telescope
};

struct ConstDecl {
    std::string name;
    std::vector<CtxEntry> tele;
    TyP ty;  // over the telescope
};

struct Signature {
    std::vector<BaseDecl> bases;
    std::vector<ConstDecl> consts;

    const BaseDecl* find_base(const std::string& n) const {
        for (auto& b : bases)
            if (b.name == n) return &b;
        return nullptr;
    }
    const ConstDecl* find_const(const std::string& n) const {
        for (auto& c : consts)
            if (c.name == n) return &c;
        return nullptr;
    }
};

// Instantiate a telescope type at the given argument list (both must have the
// same length as the telescope prefix the type may mention).
inline TyP instantiate_tele(const std::vector<CtxEntry>& tele, const TyP& ty,
                            const std::vector<TmP>& args) {
    TyP r = ty;
    assert(args.size() <= tele.size());
    for (size_t i = 0; i < args.size(); ++i) r = subst_int_ty(r, tele[i].name, args[i]);
    return r;
}

}  // namespace ildtt
