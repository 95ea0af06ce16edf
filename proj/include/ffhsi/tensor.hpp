#pragma once

#include "ffhsi/tensor/activation.hpp"
#include "ffhsi/tensor/adam.hpp"
#include "ffhsi/tensor/conv1.hpp"
#include "ffhsi/tensor/dense.hpp"
#include "ffhsi/tensor/errors.hpp"
#include "ffhsi/tensor/finite_diff.hpp"
#include "ffhsi/tensor/normalize.hpp"
#include "ffhsi/tensor/pool.hpp"
#include "ffhsi/tensor/random.hpp"
#include "ffhsi/tensor/types.hpp"
