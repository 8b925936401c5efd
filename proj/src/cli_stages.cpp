namespace crashdet {}
