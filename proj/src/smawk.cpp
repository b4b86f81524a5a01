#include "treecut/smawk.hpp"

#include <algorithm>
#include <numeric>

namespace treecut {

namespace {

void smawk(const std::vector<int>& rows, const std::vector<int>& cols, const ImplicitMatrix& m,
           std::vector<RowMax>& out) {
    if (rows.empty()) return;
    // reduce: keep at most one candidate column per row
    std::vector<int> kept;
    std::vector<double> kept_val;  // kept[k] evaluated at rows[k]
    for (int c : cols) {
        while (!kept.empty()) {
            int r = rows[kept.size() - 1];
            if (kept_val.back() < m.entry(r, c)) {
                kept.pop_back();
                kept_val.pop_back();
            } else {
                break;
            }
        }
        if (kept.size() < rows.size()) {
            kept_val.push_back(m.entry(rows[kept.size()], c));
            kept.push_back(c);
        }
    }
    std::vector<int> odd;
    for (std::size_t k = 1; k < rows.size(); k += 2) odd.push_back(rows[k]);
    smawk(odd, kept, m, out);
    // interpolate the even rows between the answers of their odd neighbours
    std::size_t start = 0;
    for (std::size_t k = 0; k < rows.size(); k += 2) {
        int r = rows[k];
        int stop = k + 1 < rows.size() ? out[rows[k + 1]].col : kept.back();
        RowMax best;
        for (std::size_t c = start; c < kept.size(); ++c) {
            double v = m.entry(r, kept[c]);
            if (best.col < 0 || v > best.value) best = {kept[c], v};
            if (kept[c] == stop) {
                start = c;
                break;
            }
        }
        out[r] = best;
    }
}

}  // namespace

std::vector<RowMax> row_maxima(const ImplicitMatrix& m) {
    if (m.rows <= 0 || m.cols <= 0) throw EmptyMatrix();
    std::vector<int> rows(m.rows), cols(m.cols);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::vector<RowMax> out(m.rows);
    smawk(rows, cols, m, out);
    return out;
}

std::optional<WedgePath> longest_wedge_path(const BackboneDecomposition& dec, double s, double t, double ell) {
    if (s > t) std::swap(s, t);
    std::vector<int> on;  // secondaries rooted on the p-q stretch, by arc
    for (std::size_t i = 0; i < dec.secondary.size(); ++i)
        if (dec.secondary[i].arc >= s && dec.secondary[i].arc <= t) on.push_back(static_cast<int>(i));
    if (on.size() < 2) return std::nullopt;
    std::sort(on.begin(), on.end(), [&](int l, int r) { return dec.secondary[l].arc < dec.secondary[r].arc; });
    const auto& sec = dec.secondary;
    ImplicitMatrix m;
    m.rows = m.cols = static_cast<int>(on.size());
    m.entry = [&](int j, int i) {
        const auto &si = sec[on[i]], &sj = sec[on[j]];
        double via_roots = (si.arc - s) + ell + (t - sj.arc);
        if (!(via_roots < sj.arc - si.arc)) return 0.0;
        return si.height + via_roots + sj.height;
    };
    auto maxima = row_maxima(m);
    std::optional<WedgePath> best;
    for (int j = 0; j < m.rows; ++j)
        if (maxima[j].value > 0.0 && (!best || maxima[j].value > best->length))
            best = WedgePath{maxima[j].value, on[maxima[j].col], on[j]};
    return best;
}

std::optional<WedgePath> longest_wedge_path(const GeometricTree& tree, const BackboneDecomposition& dec,
                                            const Shortcut& pq) {
    double s = backbone_arc_of(tree, dec, pq.p), t = backbone_arc_of(tree, dec, pq.q);
    if (s < 0.0 || t < 0.0)
        throw TreeError(TreeErrorKind::PointsNotOnTree, "wedge path search needs backbone endpoints");
    double ell = std::min(euclidean_distance(tree, pq.p, pq.q), network_distance(tree, pq.p, pq.q));
    return longest_wedge_path(dec, s, t, ell);
}

}  // namespace treecut
