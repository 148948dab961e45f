#pragma once

#include <vector>

#include "mfgnn/tensor/tape.hpp"

namespace mfgnn::tensor {

// Every op records its backward rule on the operands' tape and throws
// ShapeError on mismatched operands.

Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
/// a (n×m) plus row vector b (1×m) on every row.
Var add_rowvec(Var a, Var b);
Var scale(Var a, double s);
/// Elementwise product.
Var mul(Var a, Var b);
/// Row i of a (n×m) times c(i, 0) for c (n×1).
Var mul_colvec(Var a, Var c);
/// axis 0 stacks rows, axis 1 appends columns.
Var concat(Var a, Var b, int axis = 1);
Var slice(Var a, Index row, Index col, Index rows, Index cols);

Var leaky_relu(Var a, double slope);
/// alpha = 1.
Var elu(Var a);
Var sigmoid(Var a);
Var tanh(Var a);
Var abs(Var a);
/// axis 1 normalizes each row, axis 0 each column.
Var softmax(Var a, int axis = 1);

/// Column-wise maximum over all rows: n×m -> 1×m. Ties route the gradient to
/// the first maximal row.
Var row_max_pool(Var a);
/// Column-wise maximum over the rows of each segment: n×m -> segments×m.
/// Every segment must be non-empty.
Var segment_max(Var a, const std::vector<int>& segment, int segments);
/// Row sums per segment: n×m -> segments×m; empty segments are zero.
Var segment_sum(Var a, const std::vector<int>& segment, int segments);
/// Softmax of an E×1 column within each segment.
Var segment_softmax(Var a, const std::vector<int>& segment, int segments);
/// Rows `index[k]` of a: -> |index|×m.
Var gather_rows(Var a, const std::vector<int>& index);
/// Entries a(r_k, c_k): -> |rows|×1.
Var gather_entries(Var a, const std::vector<int>& rows, const std::vector<int>& cols);
/// Sum of all entries: -> 1×1.
Var sum(Var a);

/// Mean over rows of softmax cross-entropy; logits n×K, one label per row.
Var cross_entropy_with_logits(Var logits, const std::vector<int>& labels);
/// Mean binary cross-entropy of sigmoid(logits) against 0/1 labels; logits n×1.
Var binary_cross_entropy_with_logits(Var logits, const std::vector<int>& labels);

inline Var operator+(Var a, Var b) { return add(a, b); }
inline Var operator-(Var a, Var b) { return sub(a, b); }
inline Var operator*(double s, Var a) { return scale(a, s); }

// Plain-matrix forms shared with the op implementations.
Matrix softmax_rows(const Matrix& logits);
double sigmoid(double x);

}  // namespace mfgnn::tensor
