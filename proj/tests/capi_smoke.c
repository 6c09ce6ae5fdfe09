// Copyright 2026 The Knockdown Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* Plain C consumer of the public header. */
#include <math.h>
#include <stdio.h>

#include "knockdown/knockdown.h"

int main(void) {
  kd_die* die = NULL;
  if (kd_die_parse("0.5,0.5", &die) != KD_OK) return 1;
  const double a[] = {2, 0}, b[] = {1, 1};
  double k = 0.0;
  kd_status st = kd_payoff(die, KD_SCALE_DISCRETE, a, b, 2, NULL, &k, NULL);
  kd_die_destroy(die);
  if (st != KD_OK || fabs(k + 0.25) > 1e-9) {
    fprintf(stderr, "unexpected payoff %s %.12f\n", kd_status_name(st), k);
    return 1;
  }
  printf("K((2,0),(1,1)) = %.7f\n", k);
  return 0;
}
