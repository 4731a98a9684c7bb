#pragma once
// Umbrella header.

#include "wtri/errors.hpp"
#include "wtri/field.hpp"
#include "wtri/poly.hpp"
#include "wtri/linalg.hpp"
#include "wtri/mat.hpp"
#include "wtri/space.hpp"
#include "wtri/triang.hpp"
#include "wtri/adapted.hpp"
#include "wtri/subspaces.hpp"
#include "wtri/flag.hpp"
#include "wtri/recover.hpp"
#include "wtri/lemma.hpp"
#include "wtri/survey.hpp"
