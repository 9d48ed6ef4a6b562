#include "mockpadic/errors.hpp"
#include "mockpadic/etaforms.hpp"

namespace mockpadic {

RrefResult rref(const std::vector<std::vector<BigRational>>& matrix) {
    RrefResult out;
    const std::size_t rows = matrix.size();
    const std::size_t cols = rows ? matrix[0].size() : 0;
    for (const auto& row : matrix) {
        if (row.size() != cols) throw InvalidInput("rref: ragged matrix");
    }
    auto& a = out.reduced;
    auto& t = out.transform;
    a = matrix;
    t.assign(rows, std::vector<BigRational>(rows, 0));
    for (std::size_t i = 0; i < rows; ++i) t[i][i] = 1;

    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && a[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(a[pivot], a[r]);
        std::swap(t[pivot], t[r]);
        const BigRational inv = 1 / a[r][c];
        for (auto& x : a[r]) x *= inv;
        for (auto& x : t[r]) x *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            const BigRational f = a[i][c];
            for (std::size_t k = c; k < cols; ++k) {
                if (a[r][k] != 0) a[i][k] -= f * a[r][k];
            }
            for (std::size_t k = 0; k < rows; ++k) {
                if (t[r][k] != 0) t[i][k] -= f * t[r][k];
            }
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.rank = r;
    return out;
}

} // namespace mockpadic
