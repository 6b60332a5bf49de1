// Corpus runner: executes .ildtt files against an expected-outcome manifest.
//
// Manifest line format (one entry per line, U+25B8 separated):
//     file ▸ name ▸ verdict ▸ mode
// verdict ∈ {ok, type-error[:RULE], eq-true, eq-false, undecided-forbidden}
// mode    ∈ {default, ext[ N], noeta, ext[ N] noeta}
//
// `ok` accepts both plain and isomorphism declarations; `type-error` accepts
// any rejection, `type-error:RULE` only a rejection blaming RULE;
// `undecided-forbidden` accepts any decided verdict.  The mode column must
// agree with the flags written in the source declaration.

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "checker.hpp"
#include "surface.hpp"

namespace ildtt {

struct ManifestEntry {
    std::string file, name, verdict, mode;
    int line = 0;
};

struct CorpusRow {
    ManifestEntry entry;
    std::string actual;  // directive verdict, or "" on file-level failure
    bool pass = false;
    std::string note;
};

struct CorpusReport {
    std::vector<CorpusRow> rows;
    std::vector<std::string> errors;  // manifest/file-level problems
    std::set<std::string> rejected_rules;  // rules blamed by passing negative rows
    int passed = 0, failed = 0;
    bool ok() const { return failed == 0 && errors.empty(); }
};

// -- manifest -----------------------------------------------------------------

inline std::vector<std::string> split_manifest_line(const std::string& line) {
    static const std::string sep = "▸";
    std::vector<std::string> cols;
    size_t pos = 0;
    while (true) {
        size_t nxt = line.find(sep, pos);
        std::string c = nxt == std::string::npos ? line.substr(pos) : line.substr(pos, nxt - pos);
        size_t a = c.find_first_not_of(" \t");
        size_t b = c.find_last_not_of(" \t");
        cols.push_back(a == std::string::npos ? "" : c.substr(a, b - a + 1));
        if (nxt == std::string::npos) break;
        pos = nxt + sep.size();
    }
    return cols;
}

inline std::vector<ManifestEntry> parse_manifest(const std::string& text,
                                                 std::vector<std::string>& errors) {
    std::vector<ManifestEntry> out;
    std::istringstream in(text);
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        auto h = line.find('#');
        if (h != std::string::npos) line.resize(h);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cols = split_manifest_line(line);
        if (cols.size() != 4) {
            errors.push_back("manifest:" + std::to_string(ln) + ": expected 4 columns, got " +
                             std::to_string(cols.size()));
            continue;
        }
        ManifestEntry e{cols[0], cols[1], cols[2], cols[3], ln};
        bool v = e.verdict == "ok" || e.verdict == "eq-true" || e.verdict == "eq-false" ||
                 e.verdict == "undecided-forbidden" || e.verdict == "type-error" ||
                 e.verdict.rfind("type-error:", 0) == 0;
        if (!v)
            errors.push_back("manifest:" + std::to_string(ln) + ": unknown verdict '" +
                             e.verdict + "'");
        else
            out.push_back(e);
    }
    return out;
}

inline bool verdict_matches(const std::string& want, const std::string& got) {
    if (want == "ok") return got == "ok" || got == "iso-ok";
    if (want == "eq-true" || want == "eq-false") return got == want;
    if (want == "undecided-forbidden")
        return !got.empty() && got != "eq-undecided" && got != "iso-undecided";
    if (want == "type-error") return got.rfind("reject:", 0) == 0;
    if (want.rfind("type-error:", 0) == 0)
        return got == "reject:" + want.substr(std::string("type-error:").size());
    return false;
}

inline bool parse_mode(const std::string& s, EqualityMode& out) {
    EqualityMode m = EqualityMode::defaults();
    std::istringstream in(s);
    std::string tok;
    bool any = false;
    while (in >> tok) {
        any = true;
        if (tok == "default") {
            // explicit default; nothing to set
        } else if (tok == "ext") {
            m.ext_positive = true;
            std::streampos save = in.tellg();
            int fuel;
            if (in >> fuel) {
                if (fuel >= 1) m.fuel = fuel;
            } else {
                in.clear();
                in.seekg(save);
            }
        } else if (tok == "noeta") {
            m.eta_negative = false;
        } else {
            return false;
        }
    }
    if (!any) return false;
    out = m;
    return true;
}

inline bool same_mode(const EqualityMode& a, const EqualityMode& b) {
    return a.eta_negative == b.eta_negative && a.ext_positive == b.ext_positive &&
           (!a.ext_positive || a.fuel == b.fuel);
}

inline std::string show_mode(const EqualityMode& m) {
    std::string s;
    if (m.ext_positive) {
        s = "ext";
        if (m.fuel != EqualityMode::ext().fuel) s += " " + std::to_string(m.fuel);
    }
    if (!m.eta_negative) s += (s.empty() ? "" : " ") + std::string("noeta");
    return s.empty() ? "default" : s;
}

// -- runner -------------------------------------------------------------------

inline CorpusReport run_corpus(const std::string& dir, Coverage* cov = nullptr) {
    namespace fs = std::filesystem;
    CorpusReport rep;

    fs::path root(dir);
    std::ifstream mf(root / "manifest.txt");
    if (!mf) {
        rep.errors.push_back("cannot open " + (root / "manifest.txt").string());
        return rep;
    }
    std::stringstream mbuf;
    mbuf << mf.rdbuf();
    auto entries = parse_manifest(mbuf.str(), rep.errors);

    // every corpus file must appear in the manifest
    std::set<std::string> listed;
    for (auto& e : entries) listed.insert(e.file);
    for (auto& p : fs::recursive_directory_iterator(root)) {
        if (!p.is_regular_file() || p.path().extension() != ".ildtt") continue;
        std::string rel = fs::relative(p.path(), root).generic_string();
        if (!listed.count(rel))
            rep.errors.push_back("corpus file not in manifest: " + rel);
    }

    struct FileRun {
        bool loaded = false;
        std::string error;
        std::map<std::string, const Decl*> decls;
        std::map<std::string, std::string> verdicts;  // all directives, in-file
        SourceModule mod;
        Signature sig;
    };
    std::map<std::string, FileRun> files;

    for (auto& e : entries) {
        auto it = files.find(e.file);
        if (it == files.end()) {
            FileRun fr;
            std::ifstream f(root / e.file);
            if (!f) {
                fr.error = "cannot open " + e.file;
            } else {
                std::stringstream buf;
                buf << f.rdbuf();
                try {
                    Parser p(buf.str(), e.file);
                    fr.mod = p.module();
                    fr.sig = p.signature();
                    fr.loaded = true;
                } catch (const TypeError& te) {
                    fr.error = e.file + ": " + te.diag.str();
                }
            }
            if (fr.loaded) {
                for (auto& d : fr.mod.decls) {
                    DirectiveResult r = run_directive(fr.sig, d, cov);
                    fr.verdicts[d.name] = r.verdict;
                    fr.decls[d.name] = &d;
                }
            }
            it = files.emplace(e.file, std::move(fr)).first;
        }
        FileRun& fr = it->second;

        CorpusRow row;
        row.entry = e;
        if (!fr.loaded) {
            row.note = fr.error;
        } else {
            auto d = fr.decls.find(e.name);
            if (d == fr.decls.end()) {
                row.note = "no declaration named '" + e.name + "' in " + e.file;
            } else {
                EqualityMode want_mode;
                if (!parse_mode(e.mode, want_mode)) {
                    row.note = "bad mode column '" + e.mode + "'";
                } else if (!same_mode(want_mode, d->second->mode)) {
                    row.note = "mode mismatch: manifest says '" + e.mode +
                               "', declaration says '" + show_mode(d->second->mode) + "'";
                } else {
                    row.actual = fr.verdicts[e.name];
                    row.pass = verdict_matches(e.verdict, row.actual);
                    if (row.pass && row.actual.rfind("reject:", 0) == 0)
                        rep.rejected_rules.insert(row.actual.substr(7));
                }
            }
        }
        (row.pass ? rep.passed : rep.failed)++;
        rep.rows.push_back(std::move(row));
    }

    // every checkable declaration must be listed
    std::set<std::string> listed_decls;
    for (auto& e : entries) listed_decls.insert(e.file + "▸" + e.name);
    for (auto& [fname, fr] : files) {
        if (!fr.loaded) {
            rep.errors.push_back(fr.error);
            continue;
        }
        for (auto& d : fr.mod.decls) {
            if (d.kind == Decl::Type || d.kind == Decl::Const) {
                if (fr.verdicts[d.name] != "ok")
                    rep.errors.push_back(fname + ": signature declaration '" + d.name +
                                         "' failed: " + fr.verdicts[d.name]);
                continue;
            }
            if (!listed_decls.count(fname + "▸" + d.name))
                rep.errors.push_back(fname + ": declaration '" + d.name +
                                     "' is missing from the manifest");
        }
    }

    return rep;
}

inline std::vector<std::string> corpus_report_lines(const CorpusReport& rep) {
    std::vector<std::string> out;
    for (auto& r : rep.rows) {
        std::string l = (r.pass ? "PASS " : "FAIL ") + r.entry.file + " " + r.entry.name +
                        " expected=" + r.entry.verdict + " mode=" + r.entry.mode;
        if (!r.actual.empty()) l += " actual=" + r.actual;
        if (!r.note.empty()) l += "  (" + r.note + ")";
        out.push_back(l);
    }
    for (auto& e : rep.errors) out.push_back("ERROR " + e);
    out.push_back("corpus: " + std::to_string(rep.passed) + " passed, " +
                  std::to_string(rep.failed) + " failed, " +
                  std::to_string(rep.errors.size()) + " errors");
    return out;
}

}  // namespace ildtt
