#pragma once
// surface.hpp -- lexer and parser for the .ildtt surface language.
//
// Token inventory (types):  I  (x)  -o  Top  &  0  (+)  !A  Sg !x:A. B
//   Pi !x:A. B   Id A (a, a')   2
// Terms: * , a (x) b, let[C] t be x (x) y in c, \x:A. b, f a, <a,b>, fst, snd,
//   <>, inl[B] a, inr[A] b, case[C] t of inl x -> c | inr y -> d, abort[B] t,
//   !a, let[B] t be !x in b, !a (x) b, \!x:A. b, f !a, refl !a,
//   idelim[x x'. D] (a, a', p) with z -> d, tt, ff, if[z.A] t then u else v.
// Comments run from `--` to end of line. `(x)` and `(+)` lex as single tokens
// when contiguous; write `( x )` to parenthesize a variable named x.
//
// Declarations:
//   type B (x : A, ...) ;
//   const c (x : A, ...) : T ;
//   def name { ints ; lins } : T := t ;
//   check name { ... } t : T ;
//   eq name [ext 8] { ... } t == u : T ;
//   iso name { ... } A ~= B via x -> f , y -> g ;
// The context block and [mode] flags are optional.

#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "syntax.hpp"

namespace ildtt {

struct Diagnostic {
    std::string message;
    Span span;
    std::string rule;  // violated rule name, when known
    std::string decl;  // enclosing declaration, when known

    std::string str() const {
        std::string s;
        if (span.known()) s += std::to_string(span.line) + ":" + std::to_string(span.col) + ": ";
        s += message;
        if (!rule.empty()) s += " [" + rule + "]";
        return s;
    }
};

struct TypeError {
    Diagnostic diag;
};

[[noreturn]] inline void fail(std::string msg, Span sp = {}, std::string rule = "") {
    throw TypeError{Diagnostic{std::move(msg), sp, std::move(rule), ""}};
}

// ---------------------------------------------------------------------------
// Equality modes
// ---------------------------------------------------------------------------

struct EqualityMode {
    bool eta_negative = true;  // type-directed eta for Pi, -o, &, Top
    bool ext_positive = false; // bounded U-expansions for positive types
    int fuel = 8;              // rounds of U-expansion in ext mode

    static EqualityMode defaults() {
        EqualityMode m;
        if (const char* e = std::getenv("ILDTT_FUEL")) {
            int f = std::atoi(e);
            if (f >= 1) m.fuel = f;
        }
        return m;
    }
    static EqualityMode ext(int fuel_override = -1) {
        EqualityMode m = defaults();
        m.ext_positive = true;
        if (fuel_override >= 1) m.fuel = fuel_override;
        return m;
    }
};

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

struct Decl {
    enum Kind { Type, Const, Def, Check, Eq, Iso } kind = Def;
    std::string name;
    Span span;

    std::vector<CtxEntry> tele;  // Type/Const
    TyP const_ty;                // Const

    DualContext ctx;  // Def/Check/Eq/Iso
    TyP ty;           // declared type (Def/Check/Eq); left type (Iso)
    TmP term;         // Def/Check; Eq lhs
    TmP term2;        // Eq rhs

    TyP ty2;                  // Iso right type
    std::string isox, isoy;   // Iso witness binders
    TmP isof, isog;           // Iso witnesses (x:A |- f : B, y:B |- g : A)

    EqualityMode mode = EqualityMode::defaults();
};

struct SourceModule {
    std::string filename;
    std::vector<Decl> decls;
};

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok {
    Ident, Num,
    KwType, KwConst, KwDef, KwCheck, KwEq, KwIso, KwVia,
    KwLet, KwBe, KwIn, KwFst, KwSnd, KwCase, KwOf, KwInl, KwInr, KwAbort,
    KwIf, KwThen, KwElse, KwTt, KwFf, KwRefl, KwIdElim, KwWith,
    KwTop, KwSg, KwPi, KwId, KwI,
    LParen, RParen, LBrack, RBrack, LBrace, RBrace,
    Comma, Semi, Colon, Dot, Pipe, Star, Bang, Lambda, Lt, Gt,
    TopUnit,   // <>
    Tensor,    // (x)
    Plus,      // (+)
    Amp,       // &
    Lolli,     // -o
    Arrow,     // ->
    EqEq,      // ==
    IsoEq,     // ~=
    Assign,    // :=
    End,
};

struct Token {
    Tok kind;
    std::string text;
    Span span;
};

inline bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
inline bool ident_cont(char c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '\''; }

inline std::vector<Token> lex(const std::string& src) {
    static const std::map<std::string, Tok> kw = {
        {"type", Tok::KwType}, {"const", Tok::KwConst}, {"def", Tok::KwDef},
        {"check", Tok::KwCheck}, {"eq", Tok::KwEq}, {"iso", Tok::KwIso}, {"via", Tok::KwVia},
        {"let", Tok::KwLet}, {"be", Tok::KwBe}, {"in", Tok::KwIn},
        {"fst", Tok::KwFst}, {"snd", Tok::KwSnd}, {"case", Tok::KwCase}, {"of", Tok::KwOf},
        {"inl", Tok::KwInl}, {"inr", Tok::KwInr}, {"abort", Tok::KwAbort},
        {"if", Tok::KwIf}, {"then", Tok::KwThen}, {"else", Tok::KwElse},
        {"tt", Tok::KwTt}, {"ff", Tok::KwFf}, {"refl", Tok::KwRefl},
        {"idelim", Tok::KwIdElim}, {"with", Tok::KwWith},
        {"Top", Tok::KwTop}, {"Sg", Tok::KwSg}, {"Pi", Tok::KwPi}, {"Id", Tok::KwId},
        {"I", Tok::KwI},
    };
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto bump = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (i < src.size() && src[i] == '\n') { ++line; col = 1; } else { ++col; }
            ++i;
        }
    };
    auto push = [&](Tok k, std::string text, Span sp) { out.push_back({k, std::move(text), sp}); };
    while (i < src.size()) {
        char c = src[i];
        Span sp{line, col};
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { bump(1); continue; }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            while (i < src.size() && src[i] != '\n') bump(1);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == 'o') { push(Tok::Lolli, "-o", sp); bump(2); continue; }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') { push(Tok::Arrow, "->", sp); bump(2); continue; }
        if (c == '(' && i + 2 < src.size() && src[i + 1] == 'x' && src[i + 2] == ')') {
            push(Tok::Tensor, "(x)", sp); bump(3); continue;
        }
        if (c == '(' && i + 2 < src.size() && src[i + 1] == '+' && src[i + 2] == ')') {
            push(Tok::Plus, "(+)", sp); bump(3); continue;
        }
        if (c == '<' && i + 1 < src.size() && src[i + 1] == '>') { push(Tok::TopUnit, "<>", sp); bump(2); continue; }
        if (c == '=' && i + 1 < src.size() && src[i + 1] == '=') { push(Tok::EqEq, "==", sp); bump(2); continue; }
        if (c == '~' && i + 1 < src.size() && src[i + 1] == '=') { push(Tok::IsoEq, "~=", sp); bump(2); continue; }
        if (c == ':' && i + 1 < src.size() && src[i + 1] == '=') { push(Tok::Assign, ":=", sp); bump(2); continue; }
        switch (c) {
            case '(': push(Tok::LParen, "(", sp); bump(1); continue;
            case ')': push(Tok::RParen, ")", sp); bump(1); continue;
            case '[': push(Tok::LBrack, "[", sp); bump(1); continue;
            case ']': push(Tok::RBrack, "]", sp); bump(1); continue;
            case '{': push(Tok::LBrace, "{", sp); bump(1); continue;
            case '}': push(Tok::RBrace, "}", sp); bump(1); continue;
            case ',': push(Tok::Comma, ",", sp); bump(1); continue;
            case ';': push(Tok::Semi, ";", sp); bump(1); continue;
            case ':': push(Tok::Colon, ":", sp); bump(1); continue;
            case '.': push(Tok::Dot, ".", sp); bump(1); continue;
            case '|': push(Tok::Pipe, "|", sp); bump(1); continue;
            case '*': push(Tok::Star, "*", sp); bump(1); continue;
            case '!': push(Tok::Bang, "!", sp); bump(1); continue;
            case '\\': push(Tok::Lambda, "\\", sp); bump(1); continue;
            case '<': push(Tok::Lt, "<", sp); bump(1); continue;
            case '>': push(Tok::Gt, ">", sp); bump(1); continue;
            case '&': push(Tok::Amp, "&", sp); bump(1); continue;
            default: break;
        }
        if (c >= '0' && c <= '9') {
            std::string n;
            while (i < src.size() && src[i] >= '0' && src[i] <= '9') { n += src[i]; bump(1); }
            push(Tok::Num, n, sp);
            continue;
        }
        if (ident_start(c)) {
            std::string n;
            while (i < src.size() && ident_cont(src[i])) { n += src[i]; bump(1); }
            auto it = kw.find(n);
            push(it == kw.end() ? Tok::Ident : it->second, n, sp);
            continue;
        }
        fail("unexpected character '" + std::string(1, c) + "'", sp);
    }
    out.push_back({Tok::End, "", {line, col}});
    return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
    Parser(std::string src, std::string filename, const Signature* ambient = nullptr)
        : toks_(lex(src)), filename_(std::move(filename)) {
        if (ambient) sig_ = *ambient;
    }

    SourceModule module() {
        SourceModule m;
        m.filename = filename_;
        while (!at(Tok::End)) m.decls.push_back(decl());
        return m;
    }

    // Parse a standalone term/type against a context (used by the CLI and tests).
    TmP standalone_term(const DualContext& ctx) {
        scopes_.clear();
        ctx_ = ctx;
        TmP t = term();
        expect(Tok::End, "end of input");
        return t;
    }
    TyP standalone_type(const DualContext& ctx) {
        scopes_.clear();
        ctx_ = ctx;
        TyP t = type();
        expect(Tok::End, "end of input");
        return t;
    }

    const Signature& signature() const { return sig_; }

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
    std::string filename_;
    Signature sig_;
    DualContext ctx_;                                   // context block of current decl
    std::vector<std::pair<std::string, Sort>> scopes_;  // binder stack (innermost last)
    int depth_ = 0;

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& pp) : p(pp) {
            if (++p.depth_ > 400) fail("nesting too deep", p.peek().span);
        }
        ~DepthGuard() { --p.depth_; }
    };

    const Token& peek(int k = 0) const {
        size_t j = pos_ + k;
        return j < toks_.size() ? toks_[j] : toks_.back();
    }
    bool at(Tok k, int ahead = 0) const { return peek(ahead).kind == k; }
    Token eat() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    Token expect(Tok k, const std::string& what) {
        if (!at(k)) fail("expected " + what + ", found '" + peek().text + "'", peek().span);
        return eat();
    }
    bool accept(Tok k) {
        if (at(k)) { eat(); return true; }
        return false;
    }

    // -- declarations -------------------------------------------------------

    Decl decl() {
        Span sp = peek().span;
        if (accept(Tok::KwType)) {
            Decl d; d.kind = Decl::Type; d.span = sp;
            d.name = expect(Tok::Ident, "type name").text;
            if (sig_.find_base(d.name) || sig_.find_const(d.name))
                fail("duplicate signature name '" + d.name + "'", sp);
            d.tele = telescope();
            expect(Tok::Semi, "';'");
            sig_.bases.push_back({d.name, d.tele});
            return d;
        }
        if (accept(Tok::KwConst)) {
            Decl d; d.kind = Decl::Const; d.span = sp;
            d.name = expect(Tok::Ident, "constant name").text;
            if (sig_.find_base(d.name) || sig_.find_const(d.name))
                fail("duplicate signature name '" + d.name + "'", sp);
            d.tele = telescope();
            expect(Tok::Colon, "':'");
            with_tele(d.tele, [&] { d.const_ty = type(); });
            expect(Tok::Semi, "';'");
            sig_.consts.push_back({d.name, d.tele, d.const_ty});
            return d;
        }
        if (accept(Tok::KwDef)) {
            Decl d; d.kind = Decl::Def; d.span = sp;
            d.name = expect(Tok::Ident, "definition name").text;
            d.ctx = ctx_block();
            expect(Tok::Colon, "':'");
            d.ty = type();
            expect(Tok::Assign, "':='");
            d.term = term();
            expect(Tok::Semi, "';'");
            end_decl();
            return d;
        }
        if (accept(Tok::KwCheck)) {
            Decl d; d.kind = Decl::Check; d.span = sp;
            d.name = expect(Tok::Ident, "directive name").text;
            d.mode = mode_flags();
            d.ctx = ctx_block();
            d.term = term();
            expect(Tok::Colon, "':'");
            d.ty = type();
            expect(Tok::Semi, "';'");
            end_decl();
            return d;
        }
        if (accept(Tok::KwEq)) {
            Decl d; d.kind = Decl::Eq; d.span = sp;
            d.name = expect(Tok::Ident, "directive name").text;
            d.mode = mode_flags();
            d.ctx = ctx_block();
            d.term = term();
            expect(Tok::EqEq, "'=='");
            d.term2 = term();
            expect(Tok::Colon, "':'");
            d.ty = type();
            expect(Tok::Semi, "';'");
            end_decl();
            return d;
        }
        if (accept(Tok::KwIso)) {
            Decl d; d.kind = Decl::Iso; d.span = sp;
            d.name = expect(Tok::Ident, "directive name").text;
            d.mode = mode_flags();
            d.ctx = ctx_block();
            d.ty = type();
            expect(Tok::IsoEq, "'~='");
            d.ty2 = type();
            expect(Tok::KwVia, "'via'");
            d.isox = expect(Tok::Ident, "witness variable").text;
            expect(Tok::Arrow, "'->'");
            with_binders({{d.isox, Sort::Lin}}, [&] { d.isof = close1(term(), Sort::Lin, d.isox); });
            expect(Tok::Comma, "','");
            d.isoy = expect(Tok::Ident, "witness variable").text;
            expect(Tok::Arrow, "'->'");
            with_binders({{d.isoy, Sort::Lin}}, [&] { d.isog = close1(term(), Sort::Lin, d.isoy); });
            expect(Tok::Semi, "';'");
            end_decl();
            return d;
        }
        fail("expected a declaration (type/const/def/check/eq/iso)", sp);
    }

    void end_decl() {
        ctx_ = DualContext{};
        scopes_.clear();
    }

    std::vector<CtxEntry> telescope() {
        std::vector<CtxEntry> tele;
        if (!accept(Tok::LParen)) return tele;
        ctx_ = DualContext{};
        if (!at(Tok::RParen)) {
            do {
                std::string n = expect(Tok::Ident, "parameter name").text;
                expect(Tok::Colon, "':'");
                TyP t = type();
                tele.push_back({n, t});
                ctx_.intc.push_back({n, t});
            } while (accept(Tok::Comma));
        }
        expect(Tok::RParen, "')'");
        ctx_ = DualContext{};
        return tele;
    }

    DualContext ctx_block() {
        DualContext ctx;
        if (!accept(Tok::LBrace)) return ctx;
        ctx_ = DualContext{};
        if (!at(Tok::Semi) && !at(Tok::RBrace)) {
            do {
                std::string n = expect(Tok::Ident, "variable name").text;
                expect(Tok::Colon, "':'");
                TyP t = type();
                ctx.intc.push_back({n, t});
                ctx_.intc.push_back({n, t});
            } while (accept(Tok::Comma));
        }
        if (accept(Tok::Semi)) {
            if (!at(Tok::RBrace)) {
                do {
                    std::string n = expect(Tok::Ident, "variable name").text;
                    expect(Tok::Colon, "':'");
                    TyP t = type();
                    ctx.linc.push_back({n, t});
                    ctx_.linc.push_back({n, t});
                } while (accept(Tok::Comma));
            }
        }
        expect(Tok::RBrace, "'}'");
        return ctx;
    }

    EqualityMode mode_flags() {
        EqualityMode m = EqualityMode::defaults();
        if (!accept(Tok::LBrack)) return m;
        while (!accept(Tok::RBrack)) {
            Token t = eat();
            if (t.kind == Tok::Ident && t.text == "ext") {
                m.ext_positive = true;
                if (at(Tok::Num)) m.fuel = std::max(1, std::atoi(eat().text.c_str()));
            } else if (t.kind == Tok::Ident && t.text == "noeta") {
                m.eta_negative = false;
            } else if (t.kind == Tok::End) {
                fail("unterminated mode flags", t.span);
            } else {
                fail("unknown mode flag '" + t.text + "'", t.span);
            }
        }
        return m;
    }

    // -- scope helpers ------------------------------------------------------

    template <class F>
    void with_binders(std::vector<std::pair<std::string, Sort>> names, F&& f) {
        for (auto& n : names) scopes_.push_back(n);
        f();
        for (size_t k = 0; k < names.size(); ++k) scopes_.pop_back();
    }

    template <class F>
    void with_tele(const std::vector<CtxEntry>& tele, F&& f) {
        DualContext saved = ctx_;
        ctx_ = DualContext{};
        for (auto& e : tele) ctx_.intc.push_back(e);
        f();
        ctx_ = saved;
    }

    static TmP close1(const TmP& t, Sort s, const std::string& n) {
        return close_tm(t, {{s, n}}, 0);
    }

    TmP resolve(const std::string& name, Span sp) {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
            if (it->first == name) return mk_tm(TmFVar{it->second, name}, sp);
        if (ctx_.lookup_lin(name)) return mk_tm(TmFVar{Sort::Lin, name}, sp);
        if (ctx_.lookup_int(name)) return mk_tm(TmFVar{Sort::Int, name}, sp);
        if (sig_.find_const(name)) return mk_tm(TmConst{name, {}}, sp);
        if (sig_.find_base(name)) fail("type family '" + name + "' used in term position", sp);
        fail("unbound name '" + name + "'", sp);
    }

    // -- types --------------------------------------------------------------

    TyP type() {
        DepthGuard g(*this);
        Span sp = peek().span;
        if (at(Tok::KwSg) || at(Tok::KwPi)) {
            bool sg = eat().kind == Tok::KwSg;
            expect(Tok::Bang, "'!'");
            std::string x = expect(Tok::Ident, "binder name").text;
            expect(Tok::Colon, "':'");
            TyP dom = type();
            expect(Tok::Dot, "'.'");
            TyP body;
            with_binders({{x, Sort::Int}}, [&] { body = close_ty(type(), {{Sort::Int, x}}, 0); });
            if (sg) return mk_ty(TySigma{x, dom, body}, sp);
            return mk_ty(TyPi{x, dom, body}, sp);
        }
        return ty_lolli();
    }

    TyP ty_lolli() {
        Span sp = peek().span;
        TyP a = ty_sum();
        if (accept(Tok::Lolli)) return mk_ty(TyLolli{a, type()}, sp);
        return a;
    }

    TyP ty_sum() {
        Span sp = peek().span;
        TyP a = ty_tensor();
        if (accept(Tok::Plus)) return mk_ty(TyPlus{a, ty_sum()}, sp);
        if (accept(Tok::Amp)) return mk_ty(TyWith{a, ty_sum()}, sp);
        return a;
    }

    TyP ty_tensor() {
        Span sp = peek().span;
        TyP a = ty_bang();
        if (accept(Tok::Tensor)) return mk_ty(TyTensor{a, ty_tensor()}, sp);
        return a;
    }

    TyP ty_bang() {
        Span sp = peek().span;
        if (accept(Tok::Bang)) return mk_ty(TyBang{ty_bang()}, sp);
        return ty_atom();
    }

    TyP ty_atom() {
        DepthGuard g(*this);
        Span sp = peek().span;
        if (accept(Tok::KwI)) return mk_ty(TyUnit{}, sp);
        if (accept(Tok::KwTop)) return mk_ty(TyTop{}, sp);
        if (at(Tok::Num)) {
            Token t = eat();
            if (t.text == "0") return mk_ty(TyZero{}, sp);
            if (t.text == "2") return mk_ty(TyTwo{}, sp);
            fail("unexpected number '" + t.text + "' in type", sp);
        }
        if (accept(Tok::KwId)) {
            TyP a = ty_atom();
            expect(Tok::LParen, "'('");
            TmP l = term();
            expect(Tok::Comma, "','");
            TmP r = term();
            expect(Tok::RParen, "')'");
            return mk_ty(TyId{a, l, r}, sp);
        }
        if (at(Tok::Ident)) {
            std::string n = eat().text;
            const BaseDecl* b = sig_.find_base(n);
            if (!b) fail("unknown type '" + n + "'", sp);
            std::vector<TmP> args;
            if (accept(Tok::LBrack)) {
                if (!at(Tok::RBrack)) {
                    do { args.push_back(term()); } while (accept(Tok::Comma));
                }
                expect(Tok::RBrack, "']'");
            }
            if (args.size() != b->tele.size())
                fail("type family '" + n + "' expects " + std::to_string(b->tele.size()) +
                         " argument(s), got " + std::to_string(args.size()),
                     sp);
            return mk_ty(TyBase{n, std::move(args)}, sp);
        }
        if (accept(Tok::LParen)) {
            TyP t = type();
            expect(Tok::RParen, "')'");
            return t;
        }
        fail("expected a type, found '" + peek().text + "'", sp);
    }

    // -- terms --------------------------------------------------------------

    TyP motive_opt() {
        if (!accept(Tok::LBrack)) return nullptr;
        TyP t = type();
        expect(Tok::RBrack, "']'");
        return t;
    }

    TmP term() {
        DepthGuard g(*this);
        Span sp = peek().span;
        if (accept(Tok::Lambda)) {
            bool pi = accept(Tok::Bang);
            std::string x = expect(Tok::Ident, "binder name").text;
            expect(Tok::Colon, "':'");
            TyP dom = type();
            expect(Tok::Dot, "'.'");
            Sort s = pi ? Sort::Int : Sort::Lin;
            TmP body;
            with_binders({{x, s}}, [&] { body = close1(term(), s, x); });
            if (pi) return mk_tm(TmPiLam{x, dom, body}, sp);
            return mk_tm(TmLam{x, dom, body}, sp);
        }
        if (accept(Tok::KwLet)) {
            TyP motive = motive_opt();
            TmP scrut = tm_pair();
            expect(Tok::KwBe, "'be'");
            if (accept(Tok::Star)) {
                expect(Tok::KwIn, "'in'");
                return mk_tm(TmLetUnit{motive, scrut, term()}, sp);
            }
            if (accept(Tok::Bang)) {
                std::string x = expect(Tok::Ident, "pattern variable").text;
                if (accept(Tok::Tensor)) {
                    std::string y = expect(Tok::Ident, "pattern variable").text;
                    expect(Tok::KwIn, "'in'");
                    TmP body;
                    with_binders({{x, Sort::Int}, {y, Sort::Lin}}, [&] {
                        body = close_tm(term(), {{Sort::Int, x}, {Sort::Lin, y}}, 0);
                    });
                    return mk_tm(TmLetSigma{motive, scrut, x, y, body}, sp);
                }
                expect(Tok::KwIn, "'in'");
                TmP body;
                with_binders({{x, Sort::Int}}, [&] { body = close1(term(), Sort::Int, x); });
                return mk_tm(TmLetBang{motive, scrut, x, body}, sp);
            }
            std::string x = expect(Tok::Ident, "pattern variable").text;
            expect(Tok::Tensor, "'(x)'");
            std::string y = expect(Tok::Ident, "pattern variable").text;
            expect(Tok::KwIn, "'in'");
            TmP body;
            with_binders({{x, Sort::Lin}, {y, Sort::Lin}}, [&] {
                body = close_tm(term(), {{Sort::Lin, x}, {Sort::Lin, y}}, 0);
            });
            return mk_tm(TmLetTensor{motive, scrut, x, y, body}, sp);
        }
        if (accept(Tok::KwCase)) {
            TyP motive = motive_opt();
            TmP scrut = tm_pair();
            expect(Tok::KwOf, "'of'");
            expect(Tok::KwInl, "'inl'");
            std::string x = expect(Tok::Ident, "pattern variable").text;
            expect(Tok::Arrow, "'->'");
            TmP left;
            with_binders({{x, Sort::Lin}}, [&] { left = close1(term(), Sort::Lin, x); });
            expect(Tok::Pipe, "'|'");
            expect(Tok::KwInr, "'inr'");
            std::string y = expect(Tok::Ident, "pattern variable").text;
            expect(Tok::Arrow, "'->'");
            TmP right;
            with_binders({{y, Sort::Lin}}, [&] { right = close1(term(), Sort::Lin, y); });
            return mk_tm(TmCase{motive, scrut, x, left, y, right}, sp);
        }
        if (accept(Tok::KwIf)) {
            std::string hz = "z";
            TyP motive = nullptr;
            if (accept(Tok::LBrack)) {
                if (at(Tok::Ident) && at(Tok::Dot, 1)) {
                    hz = eat().text;
                    eat();  // '.'
                    with_binders({{hz, Sort::Int}}, [&] {
                        motive = close_ty(type(), {{Sort::Int, hz}}, 0);
                    });
                } else {
                    // Non-dependent motive still carries the binder slot.
                    motive = close_ty(type(), {{Sort::Int, "%unused"}}, 0);
                }
                expect(Tok::RBrack, "']'");
            }
            TmP scrut = tm_pair();
            expect(Tok::KwThen, "'then'");
            TmP u = term();
            expect(Tok::KwElse, "'else'");
            TmP v = term();
            if (!motive) fail("'if' requires a motive annotation [z.A] or [A]", sp, "2-E");
            return mk_tm(TmIf{hz, motive, scrut, u, v}, sp);
        }
        if (accept(Tok::KwIdElim)) {
            expect(Tok::LBrack, "'['");
            std::string x = expect(Tok::Ident, "motive binder").text;
            std::string x2 = expect(Tok::Ident, "motive binder").text;
            expect(Tok::Dot, "'.'");
            TyP motive;
            with_binders({{x, Sort::Int}, {x2, Sort::Int}}, [&] {
                motive = close_ty(type(), {{Sort::Int, x}, {Sort::Int, x2}}, 0);
            });
            expect(Tok::RBrack, "']'");
            expect(Tok::LParen, "'('");
            TmP a = term();
            expect(Tok::Comma, "','");
            TmP a2 = term();
            expect(Tok::Comma, "','");
            TmP p = term();
            expect(Tok::RParen, "')'");
            expect(Tok::KwWith, "'with'");
            std::string z = expect(Tok::Ident, "branch binder").text;
            std::vector<IdTeleEntry> tele;
            while (accept(Tok::Comma)) {
                std::string w = expect(Tok::Ident, "telescope variable").text;
                expect(Tok::Colon, "':'");
                TyP t;
                with_binders({{z, Sort::Int}}, [&] { t = close_ty(type(), {{Sort::Int, z}}, 0); });
                tele.push_back({w, t});
            }
            expect(Tok::Arrow, "'->'");
            TmP branch;
            with_binders({{z, Sort::Int}}, [&] { branch = close1(term(), Sort::Int, z); });
            return mk_tm(TmIdElim{x, x2, motive, std::move(tele), z, branch, a, a2, p}, sp);
        }
        return tm_pair();
    }

    TmP tm_pair() {
        Span sp = peek().span;
        TmP a = tm_app();
        if (accept(Tok::Tensor)) return mk_tm(TmTensor{a, tm_pair()}, sp);
        return a;
    }

    TmP tm_app() {
        DepthGuard g(*this);
        Span sp = peek().span;
        TmP head = tm_prefix();
        for (;;) {
            if (at(Tok::Bang)) {
                // `f !a` -- application to a banged argument
                eat();
                head = mk_tm(TmApp{head, mk_tm(TmBang{tm_atom()}, sp)}, sp);
                continue;
            }
            if (atom_start()) {
                head = mk_tm(TmApp{head, tm_atom()}, sp);
                continue;
            }
            return head;
        }
    }

    bool atom_start() const {
        switch (peek().kind) {
            case Tok::Ident: case Tok::Star: case Tok::TopUnit: case Tok::KwTt:
            case Tok::KwFf: case Tok::Lt: case Tok::LParen:
                return true;
            default:
                return false;
        }
    }

    TmP tm_prefix() {
        Span sp = peek().span;
        if (accept(Tok::KwFst)) return mk_tm(TmFst{tm_atom_or_bang()}, sp);
        if (accept(Tok::KwSnd)) return mk_tm(TmSnd{tm_atom_or_bang()}, sp);
        if (accept(Tok::KwInl)) {
            expect(Tok::LBrack, "'[' (other summand annotation)");
            TyP other = type();
            expect(Tok::RBrack, "']'");
            return mk_tm(TmInl{other, tm_atom_or_bang()}, sp);
        }
        if (accept(Tok::KwInr)) {
            expect(Tok::LBrack, "'[' (other summand annotation)");
            TyP other = type();
            expect(Tok::RBrack, "']'");
            return mk_tm(TmInr{other, tm_atom_or_bang()}, sp);
        }
        if (accept(Tok::KwAbort)) {
            TyP motive = motive_opt();
            return mk_tm(TmAbort{motive, tm_atom_or_bang()}, sp);
        }
        if (accept(Tok::KwRefl)) {
            expect(Tok::Bang, "'!'");
            return mk_tm(TmRefl{tm_atom()}, sp);
        }
        return tm_atom_or_bang();
    }

    TmP tm_atom_or_bang() {
        Span sp = peek().span;
        if (accept(Tok::Bang)) return mk_tm(TmBang{tm_atom_or_bang()}, sp);
        return tm_atom();
    }

    TmP tm_atom() {
        DepthGuard g(*this);
        Span sp = peek().span;
        if (accept(Tok::Star)) return mk_tm(TmStar{}, sp);
        if (accept(Tok::TopUnit)) return mk_tm(TmTopUnit{}, sp);
        if (accept(Tok::KwTt)) return mk_tm(TmTt{}, sp);
        if (accept(Tok::KwFf)) return mk_tm(TmFf{}, sp);
        if (accept(Tok::Lt)) {
            TmP a = term();
            expect(Tok::Comma, "','");
            TmP b = term();
            expect(Tok::Gt, "'>'");
            return mk_tm(TmPair{a, b}, sp);
        }
        if (accept(Tok::LParen)) {
            TmP t = term();
            expect(Tok::RParen, "')'");
            return t;
        }
        if (at(Tok::Ident)) {
            std::string n = eat().text;
            TmP v = resolve(n, sp);
            if (tm_as<TmConst>(v)) {
                const ConstDecl* cd = sig_.find_const(n);
                std::vector<TmP> args;
                if (accept(Tok::LBrack)) {
                    if (!at(Tok::RBrack)) {
                        do { args.push_back(term()); } while (accept(Tok::Comma));
                    }
                    expect(Tok::RBrack, "']'");
                }
                if (args.size() != cd->tele.size())
                    fail("constant '" + n + "' expects " + std::to_string(cd->tele.size()) +
                             " argument(s), got " + std::to_string(args.size()),
                         sp);
                return mk_tm(TmConst{n, std::move(args)}, sp);
            }
            return v;
        }
        fail("expected a term, found '" + peek().text + "'", sp);
    }
};

// Convenience wrappers -------------------------------------------------------

struct ParseResult {
    std::optional<SourceModule> module;
    std::optional<Diagnostic> error;
};

inline ParseResult parse_module(const std::string& src, const std::string& filename = "<input>") {
    try {
        Parser p(src, filename);
        return {p.module(), std::nullopt};
    } catch (const TypeError& e) {
        return {std::nullopt, e.diag};
    } catch (const std::exception& e) {
        return {std::nullopt, Diagnostic{std::string("internal error: ") + e.what(), {}, "", ""}};
    }
}

}  // namespace ildtt
