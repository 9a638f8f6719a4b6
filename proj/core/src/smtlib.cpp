// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "aimc/error.hpp"
#include "aimc/etr.hpp"

namespace aimc::etr {

namespace {

std::string literal(const Rational& r) {
    const bool negative = r.sign() < 0;
    const Rational a = r.abs();
    std::string body = a.is_integer() ? a.numerator().get_str()
                                      : "(/ " + a.numerator().get_str() + " " + a.denominator().get_str() + ")";
    return negative ? "(- " + body + ")" : body;
}

std::string term(const Rational& coef, const Polynomial::Monomial& m, const std::vector<std::string>& names) {
    if (m.empty()) {
        return literal(coef);
    }
    std::vector<std::string> factors;
    if (coef != Rational(1)) {
        factors.push_back(literal(coef));
    }
    for (const auto& [var, exp] : m) {
        for (unsigned i = 0; i < exp; ++i) {
            factors.push_back(names.at(var));
        }
    }
    if (factors.size() == 1) {
        return factors.front();
    }
    std::string out = "(*";
    for (const auto& f : factors) {
        out += " " + f;
    }
    return out + ")";
}

std::string expr(const Polynomial& p, const std::vector<std::string>& names) {
    if (p.is_zero()) {
        return "0";
    }
    std::vector<std::string> terms;
    for (const auto& [m, c] : p.terms()) {
        terms.push_back(term(c, m, names));
    }
    if (terms.size() == 1) {
        return terms.front();
    }
    std::string out = "(+";
    for (const auto& t : terms) {
        out += " " + t;
    }
    return out + ")";
}

const char* op(Cmp c) {
    switch (c) {
    case Cmp::Eq:
        return "=";
    case Cmp::Lt:
        return "<";
    case Cmp::Le:
        return "<=";
    case Cmp::Gt:
        return ">";
    case Cmp::Ge:
        return ">=";
    }
    return "=";
}

// Minimal s-expression reader for solver models.
struct Sexp {
    std::string atom;
    std::vector<Sexp> list;
    bool is_list = false;
};

class Reader {
  public:
    explicit Reader(const std::string& text) : text_(text) {}

    std::vector<Sexp> read_all() {
        std::vector<Sexp> out;
        skip();
        while (pos_ < text_.size()) {
            out.push_back(read());
            skip();
        }
        return out;
    }

  private:
    void skip() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            } else if (text_[pos_] == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    Sexp read() {
        Sexp s;
        if (text_[pos_] == '(') {
            s.is_list = true;
            ++pos_;
            skip();
            while (pos_ < text_.size() && text_[pos_] != ')') {
                s.list.push_back(read());
                skip();
            }
            if (pos_ >= text_.size()) {
                throw ParseError("unbalanced parentheses in solver output");
            }
            ++pos_;
            return s;
        }
        if (text_[pos_] == ')') {
            throw ParseError("unexpected ')' in solver output");
        }
        if (text_[pos_] == '"' || text_[pos_] == '|') {
            const char close = text_[pos_];
            const std::size_t start = pos_++;
            while (pos_ < text_.size() && text_[pos_] != close) {
                ++pos_;
            }
            ++pos_;
            s.atom = text_.substr(start, pos_ - start);
            return s;
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
               text_[pos_] != ')') {
            ++pos_;
        }
        s.atom = text_.substr(start, pos_ - start);
        return s;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

std::optional<Rational> value_of(const Sexp& s) {
    if (!s.is_list) {
        if (s.atom.empty() || !(std::isdigit(static_cast<unsigned char>(s.atom[0])))) {
            return std::nullopt;
        }
        try {
            return s.atom.find('.') == std::string::npos ? Rational::parse(s.atom) : Rational::parse_decimal(s.atom);
        } catch (const ParseError&) {
            return std::nullopt;
        }
    }
    if (s.list.empty() || s.list[0].is_list) {
        return std::nullopt;
    }
    const std::string& head = s.list[0].atom;
    std::vector<Rational> args;
    for (std::size_t i = 1; i < s.list.size(); ++i) {
        auto v = value_of(s.list[i]);
        if (!v) {
            return std::nullopt;
        }
        args.push_back(*v);
    }
    if (args.empty()) {
        return std::nullopt;
    }
    Rational acc = args[0];
    if (head == "-") {
        if (args.size() == 1) {
            return -acc;
        }
        for (std::size_t i = 1; i < args.size(); ++i) {
            acc -= args[i];
        }
        return acc;
    }
    if (head == "+" || head == "*" || head == "/") {
        for (std::size_t i = 1; i < args.size(); ++i) {
            if (head == "+") {
                acc += args[i];
            } else if (head == "*") {
                acc *= args[i];
            } else if (args[i].is_zero()) {
                return std::nullopt;
            } else {
                acc /= args[i];
            }
        }
        return acc;
    }
    return std::nullopt;
}

void collect_definitions(const Sexp& s, SolveResult& out) {
    if (!s.is_list) {
        return;
    }
    if (s.list.size() == 5 && !s.list[0].is_list && s.list[0].atom == "define-fun" && !s.list[1].is_list &&
        s.list[2].is_list && s.list[2].list.empty()) {
        const std::string& name = s.list[1].atom;
        if (auto v = value_of(s.list[4])) {
            out.assignment[name] = *v;
        } else {
            out.inexact.push_back(name);
        }
        return;
    }
    for (const Sexp& child : s.list) {
        collect_definitions(child, out);
    }
}

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
        ++a;
    }
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
        --b;
    }
    return s.substr(a, b - a);
}

struct TempFile {
    std::string path;
    ~TempFile() {
        if (!path.empty()) {
            std::error_code ec;
            std::filesystem::remove(path, ec);
        }
    }
};

} // namespace

std::string emit_smtlib(const Formula& f) {
    std::ostringstream out;
    out << "(set-option :produce-models true)\n(set-logic QF_NRA)\n";
    for (const auto& v : f.variables) {
        out << "(declare-const " << v << " Real)\n";
    }
    std::vector<std::string> atoms;
    for (const Atom& a : f.atoms) {
        atoms.push_back(std::string("(") + op(a.cmp) + " " + expr(a.lhs, f.variables) + " " +
                        expr(a.rhs, f.variables) + ")");
    }
    if (atoms.empty()) {
        out << "(assert true)\n";
    } else if (atoms.size() == 1) {
        out << "(assert " << atoms.front() << ")\n";
    } else {
        out << "(assert (and";
        for (const auto& a : atoms) {
            out << "\n  " << a;
        }
        out << "))\n";
    }
    out << "(check-sat)\n(get-model)\n";
    return out.str();
}

SolveResult parse_solver_output(const std::string& output) {
    SolveResult result;
    std::istringstream in(output);
    std::string line;
    std::string rest;
    bool found = false;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (!found) {
            if (t == "sat") {
                result.status = SolveStatus::Sat;
                found = true;
            } else if (t == "unsat") {
                result.status = SolveStatus::Unsat;
                found = true;
            } else if (t == "unknown") {
                result.status = SolveStatus::Unknown;
                found = true;
            } else if (!t.empty()) {
                result.diagnostics += t + "\n";
            }
            continue;
        }
        rest += line + "\n";
    }
    if (!found) {
        result.diagnostics = "no sat/unsat/unknown verdict in solver output\n" + result.diagnostics;
        return result;
    }
    if (result.status == SolveStatus::Sat) {
        try {
            for (const Sexp& s : Reader(rest).read_all()) {
                collect_definitions(s, result);
            }
        } catch (const ParseError& e) {
            result.diagnostics += std::string("model not parsed: ") + e.what() + "\n";
        }
    }
    return result;
}

SolveResult solve_external(const Formula& f, const std::string& command, std::chrono::milliseconds timeout) {
    const auto placeholder = command.find("{file}");
    if (placeholder == std::string::npos) {
        throw PreconditionError("solver command must contain the {file} placeholder");
    }
    TempFile script;
    {
        std::string tmpl = (std::filesystem::temp_directory_path() / "aimc-XXXXXX.smt2").string();
        std::vector<char> buf(tmpl.begin(), tmpl.end());
        buf.push_back('\0');
        const int fd = mkstemps(buf.data(), 5);
        if (fd < 0) {
            throw SolverError("solver launch failed: cannot create temporary file");
        }
        script.path = buf.data();
        const std::string text = emit_smtlib(f);
        std::size_t written = 0;
        while (written < text.size()) {
            const ssize_t n = ::write(fd, text.data() + written, text.size() - written);
            if (n <= 0) {
                ::close(fd);
                throw SolverError("solver launch failed: cannot write script");
            }
            written += static_cast<std::size_t>(n);
        }
        ::close(fd);
    }
    std::string cmd = command;
    cmd.replace(placeholder, 6, "'" + script.path + "'");

    int pipefd[2];
    if (::pipe(pipefd) != 0) {
        throw SolverError("solver launch failed: pipe");
    }
    const pid_t pid = ::fork();
    if (pid < 0) {
        ::close(pipefd[0]);
        ::close(pipefd[1]);
        throw SolverError("solver launch failed: fork");
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(pipefd[1], STDOUT_FILENO);
        ::dup2(pipefd[1], STDERR_FILENO);
        ::close(pipefd[0]);
        ::close(pipefd[1]);
        ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::close(pipefd[1]);

    std::string output;
    bool timed_out = false;
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    char buf[4096];
    for (;;) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            timed_out = true;
            break;
        }
        pollfd pfd{pipefd[0], POLLIN, 0};
        const int ready = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 1000)));
        if (ready < 0) {
            if (errno == EINTR) {
                continue;
            }
            break;
        }
        if (ready == 0) {
            continue;
        }
        const ssize_t n = ::read(pipefd[0], buf, sizeof buf);
        if (n <= 0) {
            break;
        }
        output.append(buf, static_cast<std::size_t>(n));
    }
    ::close(pipefd[0]);
    if (timed_out) {
        ::kill(-pid, SIGKILL);
        ::kill(pid, SIGKILL);
    }
    int status = 0;
    ::waitpid(pid, &status, 0);

    if (timed_out) {
        SolveResult r;
        r.diagnostics = "solver timed out after " + std::to_string(timeout.count()) + " ms";
        return r;
    }
    if (WIFEXITED(status) && (WEXITSTATUS(status) == 127 || WEXITSTATUS(status) == 126)) {
        throw SolverError("solver launch failed: " + trim(output));
    }
    SolveResult result = parse_solver_output(output);
    if (result.status == SolveStatus::Sat && result.inexact.empty()) {
        bool complete = true;
        for (const auto& v : f.variables) {
            complete = complete && result.assignment.contains(v);
        }
        if (complete) {
            result.verified = eval_formula(f, result.assignment);
            if (!*result.verified) {
                result.diagnostics += "solver model does not satisfy the formula under exact evaluation\n";
            }
        }
    }
    return result;
}

} // namespace aimc::etr
