#ifndef QPERIOD_CATALOG_HPP
#define QPERIOD_CATALOG_HPP

#include <string>
#include <vector>

#include "qperiod/laurent.hpp"

namespace qp {

// Built-in convenient weak LG models. The expected records are closed-form
// anchors that the test suite regenerates from the exact pipeline; they are
// never consumed as ground truth by the library itself.
struct CatalogEntry {
    std::string name;
    LaurentPolynomial model;
    std::vector<std::string> conifold_point;  // exact decimal/rational strings
    std::string t_con;
    int index_r = 1;
    // (n, Cst(f^n)) for the first few nonzero regularized coefficients
    std::vector<std::pair<int, std::string>> first_regularized;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry* find_catalog(const std::string& name);
std::vector<std::string> catalog_names();

}  // namespace qp

#endif  // QPERIOD_CATALOG_HPP
