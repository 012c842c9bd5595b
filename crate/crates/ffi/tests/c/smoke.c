#include <stdio.h>
#include <string.h>
#include "vcfold.h"

#define CHECK(expr)                                                            \
  do {                                                                         \
    if (!(expr)) {                                                             \
      fprintf(stderr, "check failed: %s (%s)\n", #expr,                        \
              vcfold_last_error_message() ? vcfold_last_error_message() : ""); \
      return 1;                                                                \
    }                                                                          \
  } while (0)

int main(void) {
  uint64_t masks[] = {1, 2, 4};
  VcfoldSetSystem *sys = NULL;
  VcfoldSetSystem *folded = NULL;
  size_t dim = 0;
  uint64_t witness = 0;

  CHECK(vcfold_set_system_new(3, masks, 3, &sys) == VCFOLD_STATUS_OK);
  CHECK(vcfold_set_system_k_fold_union(sys, 2, &folded) == VCFOLD_STATUS_OK);
  CHECK(vcfold_set_system_vc_dim(folded, &dim, &witness) == VCFOLD_STATUS_OK);
  CHECK(dim == 2 && witness == 3);
  CHECK(vcfold_set_system_new(65, NULL, 0, &sys) == VCFOLD_STATUS_GUARD_EXCEEDED);
  CHECK(vcfold_last_error_message() != NULL);
  vcfold_set_system_free(folded);
  vcfold_set_system_free(sys);

  VcfoldUnionInstance *inst = NULL;
  char *report = NULL;
  CHECK(vcfold_union_instance_build(4, 2, NULL, &inst) == VCFOLD_STATUS_OK);
  CHECK(vcfold_union_instance_len(inst) == 5);
  CHECK(vcfold_union_instance_verify(inst, &report) == VCFOLD_STATUS_OK);
  CHECK(strstr(report, "\"shattered\":true") != NULL);
  vcfold_string_free(report);
  vcfold_union_instance_free(inst);
  puts("ok");
  return 0;
}
