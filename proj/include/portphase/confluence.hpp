#pragma once

#include <string>
#include <vector>

#include "portphase/phase.hpp"

namespace portphase {

// G = {(a, b, c) : c = S a + T b, U a + W b = 0} with a in R^na, b in R^nb, c in R^nc.
struct ConfluenceRep {
    RMatrix S, T, U, W;

    int na() const { return int(S.cols()); }
    int nb() const { return int(T.cols()); }
    int nc() const { return int(S.rows()); }
    RMatrix stacked() const;  // [S T; U W]
};

// G-perp = {(alpha, beta, gamma) : gamma = Phi alpha + Psi beta, Xi alpha + Omega beta = 0}.
struct DualRep {
    RMatrix Phi, Psi, Xi, Omega;

    int na() const { return int(Phi.cols()); }
    int nb() const { return int(Psi.cols()); }
    int nc() const { return int(Phi.rows()); }
    RMatrix stacked() const;  // [Phi Psi; Xi Omega]
};

struct IndefiniteVector {
    Eigen::VectorXd a, b, c;
};

double indefinite_inner(const IndefiniteVector& x, const IndefiniteVector& y);

struct ConfluenceDiagnostics {
    bool shapes_ok = true;
    bool axiom1 = false;  // (0,0,c) in G implies c = 0
    bool axiom2 = false;  // every c is reached
    int dim = 0;          // dim G
    bool dimension_law = false;
    std::string message;
    bool ok() const { return shapes_ok && axiom1 && axiom2; }
};

// Orthonormal basis (columns) of G inside R^(na+nb+nc).
RMatrix subspace_basis(const ConfluenceRep& rep, double tol = 1e-10);
RMatrix dual_subspace_basis(const DualRep& d, double tol = 1e-10);
// Largest principal-angle sine between two column spaces (1 if dimensions differ).
double subspace_distance(const RMatrix& A, const RMatrix& B);

ConfluenceDiagnostics validate(const ConfluenceRep& rep, double tol = 1e-10);
DualRep dual(const ConfluenceRep& rep, double tol = 1e-10);
// The dual of a dual, read as a primal representation.
ConfluenceRep as_primal(const DualRep& d);
RMatrix duality_product(const ConfluenceRep& rep, const DualRep& d);

ConfluenceRep parametrize(const ConfluenceRep& rep, const RMatrix& P, const RMatrix& Q);
DualRep parametrize_dual(const DualRep& d, const RMatrix& Gamma, const RMatrix& Lambda);

CMatrix assemble_M(const DualRep& d, const CMatrix& Za, const CMatrix& Zb);
// Same M through the rank-revealing factorization B = X [Sigma; 0].
CMatrix assemble_M_compressed(const DualRep& d, const CMatrix& Za, const CMatrix& Zb, int* rank = nullptr);
bool exists(const DualRep& d, const CMatrix& Za, const CMatrix& Zb, double tol = kDefaultSchurTol);
CMatrix general_connect(const DualRep& d, const CMatrix& Za, const CMatrix& Zb, double tol = kDefaultSchurTol);

// Representations built from the port equations.
ConfluenceRep series_rep(int n);
ConfluenceRep parallel_rep(int n);
ConfluenceRep new_connection_rep();
ConfluenceRep hybrid_rep(int n, int r);
ConfluenceRep cascade_rep(int r, int s, int t);
ConfluenceRep hybrid_cascade_rep(int r, int s);

struct NamedRep {
    std::string name;
    ConfluenceRep rep;
};
std::vector<NamedRep> builtin_reps(int n = 2);
// Parses names like "series:3", "hybrid:3:1", "cascade:1:1:1", "hybrid-cascade:1:1", "new".
ConfluenceRep builtin_rep(const std::string& name_and_sizes);

}  // namespace portphase
