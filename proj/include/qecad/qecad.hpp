#ifndef QECAD_QECAD_HPP
#define QECAD_QECAD_HPP


#include "qecad/algebraic.hpp"
#include "qecad/cad.hpp"
#include "qecad/celldump.hpp"
#include "qecad/formula.hpp"
#include "qecad/polygcd.hpp"
#include "qecad/polynomial.hpp"
#include "qecad/qe.hpp"
#include "qecad/rational.hpp"
#include "qecad/resultant.hpp"
#include "qecad/stats.hpp"
#include "qecad/unipoly.hpp"
#include "qecad/varorder.hpp"

#endif  // QECAD_QECAD_HPP
