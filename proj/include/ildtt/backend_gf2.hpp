// Finite-dimensional vector spaces over the two-element field.
//
// Objects are dimensions, morphisms are dense 0/1 matrices with arithmetic
// mod 2.  Tensor is the Kronecker product (strictly associative with the
// one-dimensional unit), products and coproducts are both direct sums
// (biproducts), internal hom has dimension dim A * dim B.  The zero space is
// a zero object.

#pragma once

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

namespace ildtt {

struct Gf2Backend {
    static const char* name() { return "gf2"; }

    struct Obj {
        int n = 0;  // dimension
        bool operator==(const Obj& o) const { return n == o.n; }
    };
    struct Mor {
        Obj dom, cod;
        std::vector<uint8_t> m;  // row-major, cod.n x dom.n
        uint8_t at(int i, int j) const { return m[(size_t)i * dom.n + j]; }
        uint8_t& at(int i, int j) { return m[(size_t)i * dom.n + j]; }
        bool operator==(const Mor& o) const {
            return dom == o.dom && cod == o.cod && m == o.m;
        }
    };

    static Obj unit() { return {1}; }
    static Obj top() { return {0}; }
    static Obj zero() { return {0}; }

    static Obj tensor(Obj a, Obj b) { return {a.n * b.n}; }
    static Obj hom(Obj a, Obj b) { return {a.n * b.n}; }
    static Obj sum(const std::vector<Obj>& cs) {
        int n = 0;
        for (auto& c : cs) n += c.n;
        return {n};
    }
    static Obj prod(const std::vector<Obj>& cs) { return sum(cs); }

    static size_t size(Obj a) { return (size_t)1 << a.n; }

    static Mor make(Obj dom, Obj cod) {
        return Mor{dom, cod, std::vector<uint8_t>((size_t)dom.n * cod.n, 0)};
    }
    static Mor id(Obj a) {
        Mor m = make(a, a);
        for (int i = 0; i < a.n; ++i) m.at(i, i) = 1;
        return m;
    }
    static Mor compose(const Mor& g, const Mor& f) {
        assert(f.cod == g.dom);
        Mor r = make(f.dom, g.cod);
        for (int i = 0; i < g.cod.n; ++i)
            for (int k = 0; k < f.cod.n; ++k)
                if (g.at(i, k))
                    for (int j = 0; j < f.dom.n; ++j) r.at(i, j) ^= f.at(k, j);
        return r;
    }
    static Mor zero_mor(Obj a, Obj b) { return make(a, b); }
    static bool eq(const Mor& a, const Mor& b) { return a == b; }

    static Mor tensor_mor(const Mor& f, const Mor& g) {
        Mor r = make(tensor(f.dom, g.dom), tensor(f.cod, g.cod));
        for (int i1 = 0; i1 < f.cod.n; ++i1)
            for (int j1 = 0; j1 < f.dom.n; ++j1)
                if (f.at(i1, j1))
                    for (int i2 = 0; i2 < g.cod.n; ++i2)
                        for (int j2 = 0; j2 < g.dom.n; ++j2)
                            if (g.at(i2, j2))
                                r.at(i1 * g.cod.n + i2, j1 * g.dom.n + j2) = 1;
        return r;
    }

    static Mor perm(const std::vector<Obj>& fs, const std::vector<int>& order) {
        Obj dom = unit(), cod = unit();
        for (auto& f : fs) dom = tensor(dom, f);
        for (int k : order) cod = tensor(cod, fs[k]);
        Mor r = make(dom, cod);
        for (int x = 0; x < dom.n; ++x) {
            std::vector<int> digit(fs.size());
            int t = x;
            for (size_t i = fs.size(); i-- > 0;) {
                digit[i] = t % fs[i].n;
                t /= fs[i].n;
            }
            int y = 0;
            for (int k : order) y = y * fs[k].n + digit[k];
            r.at(y, x) = 1;
        }
        return r;
    }

    static int sum_off(const std::vector<Obj>& cs, int i) {
        int off = 0;
        for (int j = 0; j < i; ++j) off += cs[j].n;
        return off;
    }
    static Mor inj(const std::vector<Obj>& cs, int i) {
        Obj s = sum(cs);
        Mor r = make(cs[i], s);
        int off = sum_off(cs, i);
        for (int k = 0; k < cs[i].n; ++k) r.at(off + k, k) = 1;
        return r;
    }
    static Mor cotuple(const std::vector<Obj>& cs, const std::vector<Mor>& fs) {
        assert(!fs.empty());
        Obj s = sum(cs);
        Mor r = make(s, fs[0].cod);
        int off = 0;
        for (size_t i = 0; i < cs.size(); ++i) {
            for (int row = 0; row < fs[i].cod.n; ++row)
                for (int col = 0; col < cs[i].n; ++col) r.at(row, off + col) = fs[i].at(row, col);
            off += cs[i].n;
        }
        return r;
    }
    static Mor proj(const std::vector<Obj>& cs, int i) {
        Obj s = sum(cs);
        Mor r = make(s, cs[i]);
        int off = sum_off(cs, i);
        for (int k = 0; k < cs[i].n; ++k) r.at(k, off + k) = 1;
        return r;
    }
    static Mor tuple(const std::vector<Obj>& cs, const std::vector<Mor>& fs) {
        assert(!fs.empty());
        Obj s = sum(cs);
        Mor r = make(fs[0].dom, s);
        int off = 0;
        for (size_t i = 0; i < cs.size(); ++i) {
            for (int row = 0; row < fs[i].cod.n; ++row)
                for (int col = 0; col < fs[i].dom.n; ++col) r.at(off + row, col) = fs[i].at(row, col);
            off += cs[i].n;
        }
        return r;
    }

    // X (x) (+)cs  ->  (+)(X (x) cs[i])
    static Mor dist(Obj x, const std::vector<Obj>& cs) {
        std::vector<Obj> tcs;
        for (auto& c : cs) tcs.push_back(tensor(x, c));
        Obj s = sum(cs);
        Mor r = make(tensor(x, s), sum(tcs));
        for (int xi = 0; xi < x.n; ++xi) {
            int off = 0, toff = 0;
            for (size_t i = 0; i < cs.size(); ++i) {
                for (int k = 0; k < cs[i].n; ++k)
                    r.at(toff + xi * cs[i].n + k, xi * s.n + off + k) = 1;
                off += cs[i].n;
                toff += tcs[i].n;
            }
        }
        return r;
    }

    // hom(A,B) basis: (j,i) flattened as j*dimB + i, the map e_j |-> e_i.
    static Mor eval_mor(Obj a, Obj b) {
        Obj h = hom(a, b);
        Mor r = make(tensor(h, a), b);
        for (int j = 0; j < a.n; ++j)
            for (int i = 0; i < b.n; ++i) r.at(i, (j * b.n + i) * a.n + j) = 1;
        return r;
    }
    static Mor curry(const Mor& f, Obj x, Obj a, Obj b) {
        assert(f.dom == tensor(x, a) && f.cod == b);
        Mor r = make(x, hom(a, b));
        for (int xj = 0; xj < x.n; ++xj)
            for (int j = 0; j < a.n; ++j)
                for (int i = 0; i < b.n; ++i) r.at(j * b.n + i, xj) = f.at(i, xj * a.n + j);
        return r;
    }

    static std::vector<Mor> points(Obj a) {
        assert(a.n <= 20);
        std::vector<Mor> ps;
        for (size_t bits = 0; bits < size(a); ++bits) {
            Mor p = make(unit(), a);
            for (int i = 0; i < a.n; ++i) p.at(i, 0) = (bits >> (a.n - 1 - i)) & 1;
            ps.push_back(p);
        }
        return ps;
    }

    static std::string show(Obj a) { return "dim " + std::to_string(a.n); }
    static std::string show(const Mor& m) {
        std::string s = "[";
        for (int i = 0; i < m.cod.n; ++i) {
            if (i) s += "; ";
            for (int j = 0; j < m.dom.n; ++j) s += m.at(i, j) ? '1' : '0';
        }
        return s + "]";
    }

    static bool invert(const Mor& f, Mor& out) {
        if (f.dom.n != f.cod.n) return false;
        int n = f.dom.n;
        Mor a = f, r = id(f.dom);
        for (int c = 0; c < n; ++c) {
            int piv = -1;
            for (int i = c; i < n; ++i)
                if (a.at(i, c)) { piv = i; break; }
            if (piv < 0) return false;
            if (piv != c)
                for (int j = 0; j < n; ++j) {
                    std::swap(a.at(piv, j), a.at(c, j));
                    std::swap(r.at(piv, j), r.at(c, j));
                }
            for (int i = 0; i < n; ++i)
                if (i != c && a.at(i, c))
                    for (int j = 0; j < n; ++j) {
                        a.at(i, j) ^= a.at(c, j);
                        r.at(i, j) ^= r.at(c, j);
                    }
        }
        out = Mor{f.cod, f.dom, r.m};
        return true;
    }
};

}  // namespace ildtt
