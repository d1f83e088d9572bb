#include <stdio.h>
#include <string.h>

#include "lueroth_kit.h"

#define CHECK(call)                                                          \
  do {                                                                       \
    LkStatus s_ = (call);                                                    \
    if (s_ != LK_STATUS_OK) {                                                \
      fprintf(stderr, "%s -> %d: %s\n", #call, (int)s_, lk_last_error_message()); \
      return 1;                                                              \
    }                                                                        \
  } while (0)

int main(void) {
  LkForm *qstar = NULL, *cubic = NULL, *a = NULL, *b = NULL, *bad = NULL;
  LkTuple *tuple = NULL;
  size_t rank = 0;
  char *pf = NULL, *text = NULL;

  CHECK(lk_form_parse("e1^2 + e2^2 + e3^2", 0, LK_GROUP_E, 2, &qstar));
  CHECK(lk_form_parse("x1^3 + x2^3 - x3^3 - (x1 + x2 + x3)^3", 0, LK_GROUP_X, 3, &cubic));
  CHECK(lk_pairing(qstar, cubic, &tuple));
  CHECK(lk_morley(tuple, &rank, &pf));
  if (rank != 4 || strcmp(pf, "0") != 0) return 2;
  CHECK(lk_morley_kernel(tuple, &a, &b));
  CHECK(lk_form_to_string(b, &text));
  printf("%s\n", text);
  CHECK(lk_tangent_rank(qstar, cubic, &rank));
  if (rank != 7) return 3;

  if (lk_form_parse("x1^3", 0, LK_GROUP_X, 4, &bad) != LK_STATUS_DEGREE) return 4;
  if (lk_last_error_message() == NULL) return 5;

  lk_string_free(pf);
  lk_string_free(text);
  lk_form_free(a);
  lk_form_free(b);
  lk_tuple_free(tuple);
  lk_form_free(cubic);
  lk_form_free(qstar);
  return 0;
}
