#include "gaugeword/factor_pair.hpp"

#include <sstream>

#include "gaugeword/error.hpp"

namespace gaugeword {

void check_pair_shape(const FactorPair& pair) {
  if (pair.u.size() == 0 || pair.v.size() == 0 ||
      pair.u.cols() != pair.v.rows()) {
    std::ostringstream os;
    os << "factor pair shapes " << pair.u.rows() << "x" << pair.u.cols()
       << " and " << pair.v.rows() << "x" << pair.v.cols()
       << " do not share an inner dimension";
    throw Error(ErrorCode::ShapeMismatch, os.str());
  }
}

}  // namespace gaugeword
