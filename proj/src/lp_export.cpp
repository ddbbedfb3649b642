#include <sstream>
#include <string>

#include "cachelp/solver.hpp"

namespace cachelp {

namespace {

bool exact_in_decimal(const Rat& q) {
    // Exact iff the denominator is of the form 2^a 5^b.
    mpz_class d = q.get_den();
    for (int p : {2, 5})
        while (mpz_divisible_ui_p(d.get_mpz_t(), p)) mpz_divexact_ui(d.get_mpz_t(), d.get_mpz_t(), p);
    return d == 1;
}

// Decimal when that loses nothing, decimal plus an exact-form comment when not.
struct Printed {
    std::string value;
    std::string comment;  // empty when the decimal is exact
};

Printed print_rat(const Rat& q) {
    Printed p;
    p.value = rat_decimal(q, 12);
    if (!exact_in_decimal(q)) p.comment = rat_string(q);
    return p;
}

const char* rel_lp(Rel r) { return r == Rel::Le ? "<=" : r == Rel::Ge ? ">=" : "="; }

std::string lp_text(const LPInstance& lp) {
    std::ostringstream out;
    out << "\\ " << lp.label << "  M = " << rat_string(lp.memory) << "\n";
    out << "Minimize\n obj: " << lp.cols[lp.load_col].name << "\n";
    out << "Subject To\n";
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        const LinearConstraint& row = lp.rows[i];
        Printed rhs = print_rat(row.rhs);
        if (!rhs.comment.empty())
            out << "\\ c" << i << " rhs exactly " << rhs.comment << "\n";
        for (const LinTerm& t : row.terms)
            if (Printed c = print_rat(t.coef); !c.comment.empty())
                out << "\\ c" << i << " coefficient of " << lp.cols[t.col].name
                    << " exactly " << c.comment << "\n";
        out << " c" << i << ":";
        for (const LinTerm& t : row.terms) {
            Printed c = print_rat(t.coef);
            out << (t.coef >= 0 ? " + " : " - ")
                << (t.coef >= 0 ? c.value : c.value.substr(1)) << " "
                << lp.cols[t.col].name;
        }
        out << " " << rel_lp(row.rel) << " " << rhs.value << "\n";
    }
    out << "Bounds\n";
    for (const LPColumn& col : lp.cols) {
        if (col.lower == 0 && !col.upper) continue;  // the default bound
        if (col.upper && *col.upper == col.lower) {
            out << " " << col.name << " = " << print_rat(col.lower).value << "\n";
        } else if (col.upper) {
            out << " " << print_rat(col.lower).value << " <= " << col.name << " <= "
                << print_rat(*col.upper).value << "\n";
        } else {
            out << " " << col.name << " >= " << print_rat(col.lower).value << "\n";
        }
    }
    out << "End\n";
    return out.str();
}

std::string mps_text(const LPInstance& lp) {
    std::ostringstream out;
    out << "NAME " << (lp.label.empty() ? std::string{"cachelp"} : lp.label) << "\n";
    out << "ROWS\n N COST\n";
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        char kind = lp.rows[i].rel == Rel::Le ? 'L' : lp.rows[i].rel == Rel::Ge ? 'G' : 'E';
        out << " " << kind << " c" << i << "\n";
    }
    out << "COLUMNS\n";
    // Row-major input, column-major section: gather per-column entries first.
    std::vector<std::vector<std::pair<std::size_t, const Rat*>>> by_col(lp.cols.size());
    for (std::size_t i = 0; i < lp.rows.size(); ++i)
        for (const LinTerm& t : lp.rows[i].terms) by_col[t.col].push_back({i, &t.coef});
    for (std::size_t c = 0; c < lp.cols.size(); ++c) {
        const std::string& name = lp.cols[c].name;
        if (c == lp.load_col) out << " " << name << " COST 1\n";
        for (const auto& [row, coef] : by_col[c]) {
            Printed p = print_rat(*coef);
            if (!p.comment.empty()) out << "* " << name << " c" << row << " exactly " << p.comment << "\n";
            out << " " << name << " c" << row << " " << p.value << "\n";
        }
    }
    out << "RHS\n";
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        if (lp.rows[i].rhs == 0) continue;
        Printed p = print_rat(lp.rows[i].rhs);
        if (!p.comment.empty()) out << "* RHS c" << i << " exactly " << p.comment << "\n";
        out << " RHS c" << i << " " << p.value << "\n";
    }
    out << "BOUNDS\n";
    for (const LPColumn& col : lp.cols) {
        if (col.lower == 0 && !col.upper) continue;
        if (col.lower != 0) {
            Printed p = print_rat(col.lower);
            out << " LO BND " << col.name << " " << p.value << "\n";
        }
        if (col.upper) {
            Printed p = print_rat(*col.upper);
            if (!p.comment.empty()) out << "* BND " << col.name << " exactly " << p.comment << "\n";
            out << " UP BND " << col.name << " " << p.value << "\n";
        }
    }
    out << "ENDATA\n";
    return out.str();
}

}  // namespace

std::string export_lp(const LPInstance& lp, ExportFormat format) {
    return format == ExportFormat::LpText ? lp_text(lp) : mps_text(lp);
}

}  // namespace cachelp
