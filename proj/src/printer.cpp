#include "mfl/printer.hpp"

#include <sstream>

namespace mfl {
namespace {

// Precedence levels, loosest first.
enum Prec { kArrow = 0, kSum = 1, kProd = 2, kPrefix = 3, kPostfix = 4, kAtom = 5 };

void type_out(std::ostream& os, const TypePtr& t, int ctx) {
  auto wrap = [&](int mine, auto&& body) {
    if (mine < ctx) os << '(';
    body();
    if (mine < ctx) os << ')';
  };
  switch (t->kind) {
    case TypeKind::Unit: os << "unit"; return;
    case TypeKind::Int: os << "int"; return;
    case TypeKind::Var: os << t->var; return;
    case TypeKind::Box:
      wrap(kPostfix, [&] {
        type_out(os, t->left, kPostfix);
        os << " box";
      });
      return;
    case TypeKind::Bang:
      wrap(kPrefix, [&] {
        os << '!';
        type_out(os, t->left, kPrefix);
      });
      return;
    case TypeKind::Prod:
      wrap(kProd, [&] {
        type_out(os, t->left, kProd + 1);
        os << " * ";
        type_out(os, t->right, kProd);
      });
      return;
    case TypeKind::Sum:
      wrap(kSum, [&] {
        type_out(os, t->left, kSum + 1);
        os << " + ";
        type_out(os, t->right, kSum);
      });
      return;
    case TypeKind::MArrow:
      wrap(kArrow, [&] {
        type_out(os, t->left, kArrow + 1);
        os << " -> ";
        type_out(os, t->right, kArrow);
      });
      return;
    case TypeKind::Rec:
      // rec extends as far right as possible, so it is bracketed unless it
      // stands alone.
      wrap(ctx > kArrow ? kArrow - 1 : kArrow, [&] {
        os << "rec " << t->var << ". ";
        type_out(os, t->left, kArrow);
      });
      return;
  }
}

bool is_if_scrutinee(const TermPtr& t) {
  return t->kind == TermKind::PrimOp && t->op == PrimOpKind::IntToSum;
}

void expr_out(std::ostream& os, const ExprPtr& e);

void term_out(std::ostream& os, const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Res: os << t->x; return;
    case TermKind::Unit: os << "()"; return;
    case TermKind::Int:
      if (t->num < 0)
        os << '(' << t->num << ')';
      else
        os << t->num;
      return;
    case TermKind::PrimOp:
      if (t->op == PrimOpKind::IntToSum) {
        os << "int2sum(";
        term_out(os, t->kids[0]);
        os << ')';
        return;
      }
      os << '(';
      term_out(os, t->kids[0]);
      os << ' ' << primop_symbol(t->op) << ' ';
      term_out(os, t->kids[1]);
      os << ')';
      return;
    case TermKind::Pair:
      os << '(';
      term_out(os, t->kids[0]);
      os << ", ";
      term_out(os, t->kids[1]);
      os << ')';
      return;
    case TermKind::MFun:
    case TermKind::MFunVal:
      os << "(mfun " << t->x << " (" << t->y << " : " << print_type(t->ty1)
         << ") : " << print_type(t->ty2) << " is ";
      expr_out(os, t->body);
      os << " end)";
      return;
    case TermKind::Apply:
      os << '(';
      term_out(os, t->kids[0]);
      os << ' ';
      term_out(os, t->kids[1]);
      os << ')';
      return;
    case TermKind::Bang:
      os << "(!";
      term_out(os, t->kids[0]);
      os << ')';
      return;
    case TermKind::Inl:
    case TermKind::Inr:
      os << '(' << (t->kind == TermKind::Inl ? "inl" : "inr") << '['
         << print_type(ty::sum(t->ty1, t->ty2)) << "] ";
      term_out(os, t->kids[0]);
      os << ')';
      return;
    case TermKind::Roll:
      os << "(roll[" << print_type(t->ty1) << "] ";
      term_out(os, t->kids[0]);
      os << ')';
      return;
    case TermKind::Unroll:
    case TermKind::Box:
    case TermKind::Unbox:
    case TermKind::KeyOf: {
      const char* kw = t->kind == TermKind::Unroll ? "unroll"
                       : t->kind == TermKind::Box  ? "box"
                       : t->kind == TermKind::Unbox ? "unbox"
                                                    : "keyof";
      os << '(' << kw << ' ';
      term_out(os, t->kids[0]);
      os << ')';
      return;
    }
    case TermKind::BoxVal: os << "box#" << t->num; return;
    case TermKind::Case:
      if (is_if_scrutinee(t->kids[0]) && t->x == "_" && t->y == "_") {
        os << "(if ";
        term_out(os, t->kids[0]->kids[0]);
        os << " then ";
        term_out(os, t->kids[1]);
        os << " else ";
        term_out(os, t->kids[2]);
        os << ')';
        return;
      }
      os << "(case ";
      term_out(os, t->kids[0]);
      os << " of inl " << t->x << " => ";
      term_out(os, t->kids[1]);
      os << " | inr " << t->y << " => ";
      term_out(os, t->kids[2]);
      os << " end)";
      return;
    case TermKind::Split:
      os << "(split ";
      term_out(os, t->kids[0]);
      os << " as (" << t->x << ", " << t->y << ") in ";
      term_out(os, t->kids[1]);
      os << ')';
      return;
  }
}

void binder_out(std::ostream& os, const std::string& name, const TypePtr& t) {
  os << name;
  if (t) os << " : " << print_type(t);
}

void expr_out(std::ostream& os, const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Return:
      os << "return ";
      term_out(os, e->term);
      return;
    case ExprKind::LetBang:
      os << "(let !";
      binder_out(os, e->x, e->ty1);
      os << " = ";
      term_out(os, e->term);
      os << " in ";
      expr_out(os, e->e1);
      os << ')';
      return;
    case ExprKind::LetPair:
      os << "(let* (";
      binder_out(os, e->x, e->ty1);
      os << ", ";
      binder_out(os, e->y, e->ty2);
      os << ") = ";
      term_out(os, e->term);
      os << " in ";
      expr_out(os, e->e1);
      os << ')';
      return;
    case ExprKind::MCase:
      if (is_if_scrutinee(e->term) && e->x == "_" && e->y == "_" && !e->ty1 && !e->ty2) {
        os << "mif ";
        term_out(os, e->term->kids[0]);
        os << " then ";
        expr_out(os, e->e1);
        os << " else ";
        expr_out(os, e->e2);
        os << " end";
        return;
      }
      os << "mcase ";
      term_out(os, e->term);
      os << " of inl ";
      binder_out(os, e->x, e->ty1);
      os << " => ";
      expr_out(os, e->e1);
      os << " | inr ";
      binder_out(os, e->y, e->ty2);
      os << " => ";
      expr_out(os, e->e2);
      os << " end";
      return;
  }
}

// Elements of a boxed list `box (roll (inr (h, tail)))`, or false if `v`
// does not have that shape all the way down to `box (roll (inl ()))`.
bool list_items(const Value& v, const BoxRegistry& boxes, std::vector<Value>& out) {
  Value cur = v;
  for (;;) {
    if (cur->kind != TermKind::BoxVal || !boxes.contains(cur->tag())) return false;
    const Value& cell = boxes.unbox(cur->tag());
    if (cell->kind != TermKind::Roll) return false;
    const Value& inner = cell->kids[0];
    if (inner->kind == TermKind::Inl) return inner->kids[0]->kind == TermKind::Unit;
    if (inner->kind != TermKind::Inr || inner->kids[0]->kind != TermKind::Pair) return false;
    out.push_back(inner->kids[0]->kids[0]);
    cur = inner->kids[0]->kids[1];
  }
}

void value_out(std::ostream& os, const Value& v, const BoxRegistry* boxes) {
  switch (v->kind) {
    case TermKind::Unit: os << "()"; return;
    case TermKind::Int: os << v->num; return;
    case TermKind::Pair:
      os << '(';
      value_out(os, v->kids[0], boxes);
      os << ", ";
      value_out(os, v->kids[1], boxes);
      os << ')';
      return;
    case TermKind::Bang:
      os << '!';
      value_out(os, v->kids[0], boxes);
      return;
    case TermKind::Inl:
    case TermKind::Inr:
      os << (v->kind == TermKind::Inl ? "inl " : "inr ");
      value_out(os, v->kids[0], boxes);
      return;
    case TermKind::Roll:
      os << "roll ";
      value_out(os, v->kids[0], boxes);
      return;
    case TermKind::MFun:
    case TermKind::MFunVal: os << "<mfun " << v->x << '>'; return;
    case TermKind::BoxVal: {
      if (!boxes || !boxes->contains(v->tag())) {
        os << "box#" << v->num;
        return;
      }
      std::vector<Value> items;
      if (list_items(v, *boxes, items)) {
        os << '[';
        for (std::size_t i = 0; i < items.size(); ++i) {
          if (i) os << ", ";
          value_out(os, items[i], boxes);
        }
        os << ']';
        return;
      }
      os << "box(";
      value_out(os, boxes->unbox(v->tag()), boxes);
      os << ')';
      return;
    }
    default: term_out(os, v); return;
  }
}

}  // namespace

std::string print_type(const TypePtr& t) {
  std::ostringstream os;
  type_out(os, t, kArrow);
  return os.str();
}

std::string print_term(const TermPtr& t) {
  std::ostringstream os;
  term_out(os, t);
  return os.str();
}

std::string print_expr(const ExprPtr& e) {
  std::ostringstream os;
  expr_out(os, e);
  return os.str();
}

std::string print_program(const Program& p) {
  std::ostringstream os;
  for (const auto& d : p.decls) {
    os << "val " << d.name << " = ";
    term_out(os, d.term);
    os << "\n\n";
  }
  os << "main ";
  term_out(os, p.main);
  os << '\n';
  return os.str();
}

std::string print_value(const Value& v, const BoxRegistry* boxes) {
  std::ostringstream os;
  value_out(os, v, boxes);
  return os.str();
}

}  // namespace mfl
